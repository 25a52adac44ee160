//! Elementary number theory on machine integers.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Units of Z/nZ as representatives in `[0, n)`. For `n = 1` this is `[0]`.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&l| gcd(l, n) == 1).collect()
}

/// Modular inverse of `a` mod `n`, if it exists.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let ext = (a as i64 % n as i64).extended_gcd(&(n as i64));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(n as i64) as u64)
}

/// Representative of `±a mod n` in `{0, ..., floor(n/2)}`.
pub fn fold_residue(a: i64, n: u64) -> u64 {
    let r = a.rem_euclid(n as i64) as u64;
    r.min(n - r)
}

/// Trace of `ξ_n^j` from `Q(ξ_n)` down to `Q` (a Ramanujan sum).
pub fn root_trace(j: u64, n: u64) -> i64 {
    let g = gcd(j % n, n);
    let e = n / g;
    mobius(e) * (totient(n) / totient(e)) as i64
}

/// Order of `ξ_n^j`, i.e. `n / gcd(j, n)`.
pub fn root_order(j: u64, n: u64) -> u64 {
    n / gcd(j % n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totients() {
        let expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4, 12];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(totient(i as u64 + 1), e);
        }
        for q in [7, 9, 14, 18] {
            assert_eq!(totient(q), 6);
        }
    }

    #[test]
    fn traces_match_direct_sum() {
        // Tr(ξ_n^j) = sum over primitive n-th roots of ζ^j, computed in floats.
        for n in 1..30u64 {
            for j in 0..n {
                let direct: f64 = units(n)
                    .iter()
                    .map(|&u| (2.0 * std::f64::consts::PI * (u * j) as f64 / n as f64).cos())
                    .sum();
                assert!((direct - root_trace(j, n) as f64).abs() < 1e-9, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn inverses_and_divisors() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(units(1), vec![0]);
        assert_eq!(fold_residue(-3, 11), 3);
        assert_eq!(fold_residue(8, 11), 3);
    }
}
