//! Sparse multivariate polynomials over the rationals in the coupling symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rat::{parse_rat, render_rat, Rat};
use super::AlgebraError;

/// Exponent vector with trailing zeros trimmed, so `g1` and `g1*g2^0` coincide.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Mono(exps)
    }

    pub fn var(i: usize) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = 1;
        Mono(v)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        Mono::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when every exponent allows it.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (self.exp(i), other.exp(i));
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono::new(out))
    }
}

impl Ord for Mono {
    // graded lexicographic, variable 0 most significant
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in the couplings. No zero coefficient is ever stored, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CouplingPoly {
    terms: BTreeMap<Mono, Rat>,
}

impl CouplingPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::one(), c);
        p
    }

    /// The coupling symbol with index `i` (rendered `g{i+1}`).
    pub fn var(i: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::var(i), Rat::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Rat)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Number of variable slots used by any monomial.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn neg(&self) -> Self {
        CouplingPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        CouplingPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> Self {
        CouplingPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluates at rational coupling values; missing variables read as zero.
    pub fn eval(&self, vals: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    let v = vals.get(i).cloned().unwrap_or_else(Rat::zero);
                    for _ in 0..e {
                        t *= &v;
                    }
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes `var(i) -> image[i]` for every variable.
    pub fn substitute(&self, image: &[CouplingPoly]) -> CouplingPoly {
        let mut out = CouplingPoly::zero();
        for (m, c) in &self.terms {
            let mut t = CouplingPoly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&image[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Exact division, `None` when `o` does not divide `self`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let (lm, lc) = o.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Self::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = &c / &lc;
            rem = rem.sub(&o.mul_mono(&qm, &qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Highest exponent of variable `v`.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Coefficients as a univariate polynomial in variable `v`.
    pub fn coeffs_in(&self, v: usize) -> Vec<CouplingPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![CouplingPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut ex = m.0.clone();
            if v < ex.len() {
                ex[v] = 0;
            }
            out[e].add_term(Mono::new(ex), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, cs: &[CouplingPoly]) -> CouplingPoly {
        let mut out = CouplingPoly::zero();
        for (e, c) in cs.iter().enumerate() {
            let mut m = vec![0u32; v + 1];
            m[v] = e as u32;
            out = out.add(&c.mul_mono(&Mono::new(m), &Rat::one()));
        }
        out
    }

    /// Renders with default symbol names `g1, g2, ...`.
    pub fn render(&self) -> String {
        self.render_with(&|i| format!("g{}", i + 1))
    }

    /// Canonical text: descending graded-lex order, `c*x^e` factors.
    pub fn render_with(&self, name: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !a.is_one() || m.degree() == 0 {
                factors.push(render_rat(&a));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(name(i)),
                    _ => factors.push(format!("{}^{}", name(i), e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses the canonical text form. Symbols are resolved by `lookup`.
    pub fn parse_with(
        s: &str,
        lookup: &dyn Fn(&str) -> Option<usize>,
    ) -> Result<CouplingPoly, AlgebraError> {
        let err = |pos: usize, reason: &str| AlgebraError::Parse {
            input: s.to_string(),
            position: pos,
            reason: reason.to_string(),
        };
        let bytes: Vec<char> = s.chars().collect();
        let mut i = 0;
        let mut out = CouplingPoly::zero();
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if i >= bytes.len() {
            return Err(err(0, "empty polynomial"));
        }
        let mut first = true;
        while i < bytes.len() {
            skip_ws(&mut i);
            let mut sign = Rat::one();
            if i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
                if bytes[i] == '-' {
                    sign = -sign;
                }
                i += 1;
                skip_ws(&mut i);
            } else if !first {
                return Err(err(i, "expected + or -"));
            }
            first = false;
            // one term: factors joined by '*'
            let mut coef = sign;
            let mut mono = Mono::one();
            loop {
                skip_ws(&mut i);
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], '*' | '+' | '-' | ' ' | '^') {
                    i += 1;
                }
                // a rational coefficient may contain '/'
                let tok: String = bytes[start..i].iter().collect();
                if tok.is_empty() {
                    return Err(err(start, "missing factor"));
                }
                if tok
                    .chars()
                    .next()
                    .map(|c| c.is_ascii_digit())
                    .unwrap_or(false)
                {
                    let r = parse_rat(&tok).map_err(|e| match e {
                        AlgebraError::Parse {
                            position, reason, ..
                        } => err(start + position, &reason),
                        _ => err(start, "bad rational coefficient"),
                    })?;
                    coef *= r;
                } else {
                    let v = lookup(&tok).ok_or_else(|| err(start, "unknown symbol"))?;
                    let mut e = 1u32;
                    if i < bytes.len() && bytes[i] == '^' {
                        i += 1;
                        let s2 = i;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                        let t: String = bytes[s2..i].iter().collect();
                        e = t.parse().map_err(|_| err(s2, "bad exponent"))?;
                    }
                    let mut ex = vec![0u32; v + 1];
                    ex[v] = e;
                    mono = mono.mul(&Mono::new(ex));
                }
                skip_ws(&mut i);
                if i < bytes.len() && bytes[i] == '*' {
                    i += 1;
                    continue;
                }
                break;
            }
            out.add_term(mono, coef);
            skip_ws(&mut i);
        }
        Ok(out)
    }

    /// Parses with default names `g1, g2, ...`.
    pub fn parse(s: &str) -> Result<CouplingPoly, AlgebraError> {
        Self::parse_with(s, &default_symbol)
    }
}

pub fn default_symbol(tok: &str) -> Option<usize> {
    let rest = tok.strip_prefix('g')?;
    let k: usize = rest.parse().ok()?;
    if k == 0 {
        None
    } else {
        Some(k - 1)
    }
}

impl fmt::Display for CouplingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::rat::rat;

    fn g(i: usize) -> CouplingPoly {
        CouplingPoly::var(i)
    }

    #[test]
    fn grlex_order_and_render() {
        let p = g(0)
            .scale(&rat(-10, 1))
            .sub(&g(1).scale(&rat(4, 1)))
            .sub(&g(2).scale(&rat(7, 1)));
        assert_eq!(p.render(), "-10*g1 - 4*g2 - 7*g3");
        let q = g(0)
            .mul(&g(0))
            .add(&g(1).mul(&g(2)))
            .add(&CouplingPoly::constant(rat(3, 2)));
        assert_eq!(q.render(), "g1^2 + g2*g3 + 3/2");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "2", "-10*g1 - 4*g2 - 7*g3", "-1/3*g1^3*g2 + g3^2 - 5"] {
            let p = CouplingPoly::parse(s).unwrap();
            assert_eq!(CouplingPoly::parse(&p.render()).unwrap(), p);
        }
        assert!(CouplingPoly::parse("2*x").is_err());
    }

    #[test]
    fn exact_division() {
        let a = g(0).add(&g(1));
        let b = g(0).sub(&g(2)).add(&CouplingPoly::one());
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&b), Some(a));
        assert_eq!(b.div_exact(&g(1)), None);
    }

    #[test]
    fn eval_and_substitute() {
        let p = g(0).mul(&g(1)).add(&g(2));
        assert_eq!(p.eval(&[rat(2, 1), rat(3, 1), rat(1, 2)]), rat(13, 2));
        let swapped = p.substitute(&[g(2), g(1), g(0)]);
        assert_eq!(swapped, g(2).mul(&g(1)).add(&g(0)));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::exact_algebra::rat_int;
    use proptest::prelude::*;

    fn poly(cs: &[i64]) -> CouplingPoly {
        // c0 + c1 g1 + c2 g2 g3 + c3 g1^2
        let t = [
            CouplingPoly::one(),
            CouplingPoly::var(0),
            CouplingPoly::var(1).mul(&CouplingPoly::var(2)),
            CouplingPoly::var(0).mul(&CouplingPoly::var(0)),
        ];
        cs.iter().zip(&t).fold(CouplingPoly::zero(), |acc, (c, m)| {
            acc.add(&m.scale(&rat_int(*c)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_axioms_and_text(a in prop::collection::vec(-9i64..9, 4),
                                b in prop::collection::vec(-9i64..9, 4),
                                c in prop::collection::vec(-9i64..9, 4)) {
            let (x, y, z) = (poly(&a), poly(&b), poly(&c));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            let xy = x.mul(&y);
            prop_assert_eq!(CouplingPoly::parse(&xy.render()).unwrap(), xy);
        }
    }
}
