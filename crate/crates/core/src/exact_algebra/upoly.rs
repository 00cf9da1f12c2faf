//! Dense univariate polynomials over Q, coefficients listed from degree 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::Rat;

pub fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = degree(b).expect("division by the zero polynomial");
    let lb = b[db].clone();
    let mut r = trim(a.to_vec());
    let mut q = vec![Rat::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] / &lb;
        for k in 0..=db {
            let t = &f * &b[k];
            r[dr - db + k] -= t;
        }
        q[dr - db] = f;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(p: &[Rat]) -> Vec<Rat> {
    match degree(p) {
        None => Vec::new(),
        Some(d) => {
            let l = p[d].clone();
            p[..=d].iter().map(|c| c / &l).collect()
        }
    }
}

pub fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while degree(&y).is_some() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn derivative(p: &[Rat]) -> Vec<Rat> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rat::from_integer(BigInt::from(k)))
            .collect(),
    )
}

pub fn eval(p: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn is_squarefree(p: &[Rat]) -> bool {
    degree(&gcd(p, &derivative(p))) == Some(0)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Distinct rational roots, ascending, by the rational root theorem.
pub fn rational_roots(p: &[Rat]) -> Vec<Rat> {
    let p = trim(p.to_vec());
    let Some(deg) = degree(&p) else {
        return Vec::new();
    };
    // clear denominators and strip the root at zero
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rat::zero());
    }
    let a0 = &ints[low];
    let an = &ints[deg];
    if deg > low {
        for num in divisors(a0) {
            for den in divisors(an) {
                for sign in [1, -1] {
                    let r = Rat::new(BigInt::from(sign) * &num, den.clone());
                    if eval(&p, &r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::{rat, rat_int};

    fn p(cs: &[i64]) -> Vec<Rat> {
        cs.iter().map(|&c| rat_int(c)).collect()
    }

    #[test]
    fn roots_of_product() {
        // (2x - 1)(x + 3)(x^2 + 1)
        let f = mul(&mul(&p(&[-1, 2]), &p(&[3, 1])), &p(&[1, 0, 1]));
        assert_eq!(rational_roots(&f), vec![rat_int(-3), rat(1, 2)]);
        assert!(is_squarefree(&f));
        assert!(!is_squarefree(&mul(&f, &p(&[3, 1]))));
    }

    #[test]
    fn division_and_gcd() {
        let a = mul(&p(&[1, 1]), &p(&[-2, 0, 1]));
        let (q, r) = divrem(&a, &p(&[1, 1]));
        assert_eq!(q, p(&[-2, 0, 1]));
        assert!(r.is_empty());
        assert_eq!(gcd(&a, &p(&[2, 2])), p(&[1, 1]));
    }
}
