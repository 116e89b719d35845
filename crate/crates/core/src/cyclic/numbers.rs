//! Arithmetic classification of sizes.

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Prime factors with multiplicity, in increasing order.
pub fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `n = p^k q` with `p, q` prime and `k ≥ 1`; prime powers qualify with `q = p`.
fn is_pk_q(factors: &[usize]) -> bool {
    let mut distinct = factors.to_vec();
    distinct.dedup();
    match distinct.len() {
        1 => factors.len() >= 2,
        2 => {
            let a = factors.iter().filter(|&&f| f == distinct[0]).count();
            let b = factors.len() - a;
            a == 1 || b == 1
        }
        _ => false,
    }
}

/// Sizes for which every factorization of Z_n is of Hajós.
pub fn is_hajos_number(n: usize) -> bool {
    let f = prime_factors(n);
    n >= 1 && (f.len() <= 4 || is_pk_q(&f))
}

/// Sizes for which every compatible set of n-cbc is of Hajós.
pub fn is_cbc_hajos_number(n: usize) -> bool {
    let f = prime_factors(n);
    n >= 1 && (f.len() <= 3 || is_pk_q(&f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert!(is_hajos_number(36) && !is_cbc_hajos_number(36));
        assert!(!is_hajos_number(72) && !is_cbc_hajos_number(72));
        assert!(!is_hajos_number(108));
        for p in [2, 3, 5, 7, 11, 13] {
            assert!(is_hajos_number(p) && is_cbc_hajos_number(p));
        }
        assert!(is_cbc_hajos_number(1) && is_hajos_number(1));
        assert!(is_cbc_hajos_number(64) && is_cbc_hajos_number(48));
        let failing: Vec<usize> = (1..=72).filter(|&n| !is_cbc_hajos_number(n)).collect();
        assert_eq!(failing, [36, 60, 72]);
        let non_hajos: Vec<usize> = (1..=110).filter(|&n| !is_hajos_number(n)).collect();
        assert_eq!(non_hajos, [72, 108]);
    }

    #[test]
    fn helpers() {
        assert_eq!(prime_factors(72), [2, 2, 2, 3, 3]);
        assert_eq!(prime_factors(1), Vec::<usize>::new());
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(gcd(12, 18), 6);
        assert!(is_prime(2) && !is_prime(1) && !is_prime(9));
    }
}
