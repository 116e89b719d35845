//! Frozen values for the worked examples, checked through the public API.

use bayonet::borders::{border_check_closure, scale_border, translate_border};
use bayonet::cbc::{c_of_omega, is_cbc, stable_closure, triangle_property, CbcVerdict, TriangleVerdict};
use bayonet::completion::{build_prefix_suffix_expansion, complete_hajos, ExpansionRow};
use bayonet::cyclic::{
    enumerate_krasner, extend_to_factorization, extract_restivo_pair, is_hajos_factorization, is_krasner,
    ExtensionVerdict,
};
use bayonet::hajos::{
    count_hajos_prime, is_right_periodic, krasner_border_equivalence, krasner_hajos_sweep, non_hajos_factorization_72,
    cbc_from_factorization, KrasnerBorderVerdict, RightPeriodicity,
};
use bayonet::transforms::{mu, phi, phi_closure_check};
use bayonet::words::{is_prefix_set, is_suffix_set, substitute};
use bayonet::*;

fn code(s: &str) -> FiniteCode {
    FiniteCode::parse_list(s).unwrap()
}

fn rs(n: usize, v: &[usize]) -> ResidueSet {
    ResidueSet::from_elements(n, v).unwrap()
}

fn cbc8() -> Cbc {
    Cbc::new(8, [(0, 0), (0, 1), (1, 2), (3, 3), (4, 0), (4, 1), (5, 2), (7, 7)]).unwrap()
}

fn code_e() -> FiniteCode {
    code("b ab aaaa aaba aaab aabb")
}

fn e_family() -> CbcFamily {
    let e = code_e();
    let b = c_of_omega(&e, 4, &"b".parse().unwrap()).unwrap();
    let bb = c_of_omega(&e, 4, &"bb".parse().unwrap()).unwrap();
    CbcFamily::new(vec![b, bb]).unwrap()
}

#[test]
fn words_examples() {
    let w = is_code(&code("aabb abaaa b ba")).unwrap();
    let w = w.witness().expect("not a code");
    assert_eq!(w.left_word().to_string(), "babaaabb");
    let c = code("aaa ab aab bba ba");
    assert!(is_code(&c).unwrap().is_code());
    assert!(is_prefix_set(&c).unwrap());
    assert!(!is_suffix_set(&c).unwrap());
    assert_eq!(substitute(&code("b ab"), &"aa".parse().unwrap()).unwrap(), code("aa aaa"));
}

#[test]
fn cyclic_examples() {
    assert!(is_factorization(&rs(8, &[4, 5, 6, 7]), &rs(8, &[1, 5]), 8));
    assert!(!is_factorization(&rs(8, &[2, 4]), &rs(8, &[0, 2, 4, 6]), 8));
    assert_eq!(rs(8, &[1, 5]).periods(), rs(8, &[0, 4]));
    assert_eq!(rs(36, &[0, 4, 8, 9, 13, 17]).periods(), rs(36, &[0]));
    assert_eq!(rs(8, &[1, 5]).decompose_periodic(4).unwrap(), rs(4, &[1]));
    assert_eq!(rs(36, &[0, 2, 12, 14, 24, 26]).decompose_periodic(12).unwrap(), rs(12, &[0, 2]));

    let f = FactorizationPair::from_elements(8, &[4, 5, 6, 7], &[1, 5]).unwrap();
    let g = f.normalize(4, 1).unwrap();
    assert_eq!((g.p().to_vec(), g.q().to_vec()), (vec![0, 1, 2, 3], vec![0, 4]));
    assert!(!is_krasner(f.p(), f.q()));
    assert!(is_krasner(&rs(4, &[0]), &rs(4, &[0, 1, 2, 3])));
    assert!(is_hajos_factorization(&f).unwrap().is_yes());

    let k4: Vec<(Vec<usize>, Vec<usize>)> = enumerate_krasner(4)
        .iter()
        .map(|k| (k.factorization.p().to_vec(), k.factorization.q().to_vec()))
        .collect();
    for pair in [(vec![0], vec![0, 1, 2, 3]), (vec![0, 2], vec![0, 1]), (vec![0, 1], vec![0, 2])] {
        assert!(k4.contains(&pair), "{pair:?}");
    }
    assert_eq!(enumerate_krasner(6).len(), 6);

    let (p0, q0) = (rs(5, &[0, 1]), rs(5, &[0, 2]));
    assert!(matches!(extend_to_factorization(&p0, &q0, 5).unwrap(), ExtensionVerdict::No { .. }));
    match extend_to_factorization(&rs(8, &[0, 1]), &rs(8, &[0, 2]), 8).unwrap() {
        ExtensionVerdict::Yes { factorization } => {
            assert!(is_factorization(factorization.p(), factorization.q(), 8))
        }
        v => panic!("{v:?}"),
    }
    let (p, q) = extract_restivo_pair(&code_e(), 4).unwrap();
    assert_eq!((p.to_vec(), q.to_vec()), (vec![0, 1, 2, 3], vec![0]));
    let (p, q) = extract_restivo_pair(&code("aaaaa ab b baa"), 5).unwrap();
    assert_eq!((p.to_vec(), q.to_vec()), (vec![0, 1], vec![0, 2]));
}

#[test]
fn hajos_numbers() {
    assert!(is_hajos_number_pair(36, true, false));
    assert!(is_hajos_number_pair(72, false, false));
    assert!(is_hajos_number_pair(8, true, true));
    assert_eq!(count_hajos_prime(2).unwrap(), 6);
    assert_eq!(count_hajos_prime(3).unwrap(), 48);
    assert_eq!(count_hajos_prime(5).unwrap(), 6130);
}

fn is_hajos_number_pair(n: usize, hajos: bool, cbc_hajos: bool) -> bool {
    bayonet::cyclic::is_hajos_number(n) == hajos && bayonet::cyclic::is_cbc_hajos_number(n) == cbc_hajos
}

#[test]
fn cbc_examples() {
    let x = cbc8();
    assert!(is_cbc(8, x.pairs()).unwrap().is_yes());
    assert!(matches!(is_cbc(3, &[(0, 0), (1, 0), (0, 1)]).unwrap(), CbcVerdict::No(_)));
    assert_eq!(x.dual().pairs(), [(0, 0), (0, 4), (1, 0), (1, 4), (2, 1), (2, 5), (3, 3), (7, 7)]);
    assert_eq!(x.left_set(), rs(8, &[0, 1, 3, 4, 5, 7]));
    let classes: Vec<Vec<usize>> = x.right_classes().iter().map(|c| c.to_vec()).collect();
    assert_eq!(classes, vec![vec![0, 1], vec![2], vec![3], vec![7]]);
    assert_eq!(triangle_property(&x), TriangleVerdict::Holds);

    let fam = e_family();
    assert_eq!(fam.members()[0].words(), code("b ab aaba aaab"));
    assert_eq!(fam.members()[1].words(), code("b ab aab aaab"));
    assert_eq!(stable_closure(&fam).unwrap().len(), 4);
}

#[test]
fn border_examples() {
    let x = CbcFamily::singleton(cbc8());
    let bd = Border::new(8, [2, 4], [0, 2, 4, 6]).unwrap();
    assert!(border_check(&bd, &cbc8()));
    let moved = translate_border(&bd, -2, 0);
    assert_eq!(moved.p_residues(), vec![0, 2]);
    assert!(border_check(&moved, &cbc8()));
    let scaled = scale_border(&bd, 3, 1).unwrap();
    assert_eq!(scaled.p_residues(), vec![6, 4]);
    assert!(border_check(&scaled, &cbc8()));
    let k = Border::new(8, [4, 5, 6, 7], [1, 5]).unwrap();
    assert!(border_check_closure(&k, &x).unwrap().borders());
    let stable = stable_closure(&e_family()).unwrap();
    assert!(border_check_closure(&Border::new(4, [0], [0, 1, 2, 3]).unwrap(), &stable).unwrap().borders());
}

#[test]
fn hajos_examples() {
    let base = Cbc::new(4, [(0, 0), (1, 0), (2, 1), (3, 3)]).unwrap();
    let dual8 = expand_ht(&HtParams { base: base.clone(), t: 2, shifts: vec![vec![0, 0], vec![0, 0], vec![0, 0], vec![0, 1]] })
        .unwrap();
    assert_eq!(dual8, cbc8().dual());
    match is_right_periodic(&cbc8().dual(), 4).unwrap() {
        RightPeriodicity::Yes(p) => assert_eq!(p.base, base),
        RightPeriodicity::No => panic!("dual is 4-periodic"),
    }
    assert!(!is_right_periodic(&cbc8(), 4).unwrap().is_yes());

    let HajosVerdict::Yes(chain) = is_hajos_cbc(&cbc8()) else { panic!() };
    let json = serde_json::to_value(&chain).unwrap();
    assert_eq!(
        json,
        serde_json::json!([
            {"t": 4, "side": "dual", "shifts": [[0, 0, 1, 3]]},
            {"t": 2, "side": "dual", "shifts": [[0, 0], [0, 0], [0, 0], [0, 1]]}
        ])
    );

    let fam = stable_closure(&e_family()).unwrap();
    match krasner_border_equivalence(&fam).unwrap() {
        KrasnerBorderVerdict::Hajos { krasner, .. } => assert_eq!(krasner.factorization.n(), 4),
        v => panic!("{v:?}"),
    }
}

#[test]
fn non_hajos_72() {
    let f = non_hajos_factorization_72();
    assert_eq!(f.p().to_vec(), vec![0, 8, 16, 18, 26, 34]);
    assert!(!is_hajos_factorization(&f).unwrap().is_yes());
    assert!(!is_hajos_cbc(&cbc_from_factorization(&f)).is_yes());
}

#[test]
fn sweep_n7_counts() {
    let rep = krasner_hajos_sweep(7, 7).unwrap();
    assert_eq!(rep.cbc_count, 2 * 7u64.pow(7) - 5040);
    assert_eq!(rep.hajos_count, rep.cbc_count);
    assert_eq!(rep.bordered_count, rep.cbc_count);
}

#[test]
fn krasner_bordered_non_hajos_witness() {
    let y = Cbc::new(8, [(0, 0), (0, 1), (0, 4), (1, 5), (2, 0), (2, 1), (2, 4), (3, 5)]).unwrap();
    assert_eq!(y.words(), code("b ba baaaa abaaaaa aab aaba aabaaaa aaabaaaaa"));
    assert!(!is_hajos_cbc(&y).is_yes());
    let fam = CbcFamily::singleton(y);
    let bd = Border::new(8, [0, 1, 4, 5], [0, 2]).unwrap();
    assert!(border_check_closure(&bd, &fam).unwrap().borders());
}

#[test]
fn transforms_examples() {
    let x = cbc8();
    assert_eq!(phi(&x, 1, 1), x.pairs());
    let bd = Border::new(8, [4, 5, 6, 7], [1, 5]).unwrap();
    assert!(phi_closure_check(&CbcFamily::singleton(x), &bd, 0, 3, 3).unwrap().holds());
    let t = [(0, 0), (0, 2), (1, 4)];
    assert_eq!(mu(&t, 1, 2), code("b baaaa abaaaaaaaa"));
}

#[test]
fn completion_examples() {
    let row = ExpansionRow { omega: "b".parse().unwrap(), i: vec![0, 0, 1, 3], j: vec![0, 0, 0, 0] };
    let done = build_prefix_suffix_expansion(&code("a b"), 1, 4, &[row]).unwrap();
    assert_eq!(done.code, code("aaaa b ba abaa aaabaaa"));
    assert!(done.verify());

    let fam = CbcFamily::singleton(Cbc::new(4, [(0, 0), (0, 1), (1, 2), (3, 3)]).unwrap());
    let xs = vec![fam.members()[0].pairs().to_vec()];
    let done = complete_hajos(&fam, &["b".parse().unwrap()], &xs, None).unwrap();
    assert_eq!(done.code, code("aaaa b ba abaa aaabaaa"));
    assert!(done.verify() && done.chain.reaches_alphabet());
}
