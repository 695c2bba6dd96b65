//! Univariate polynomials and their factorization.
//!
//! Over finite fields the full pipeline runs: squarefree factorization,
//! distinct-degree splitting, then Cantor–Zassenhaus equal-degree splitting
//! with a fixed-seed RNG so results are reproducible. Over `Q` we find
//! rational roots, and decide irreducibility of what is left only up to
//! degree 4.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Polynomial with coefficients listed from the constant term up.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format("x"))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn from_i64(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![field.one()])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `x - a`.
    pub fn linear_root(field: &Field, a: &Elem) -> Poly {
        Poly::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|a| self.field.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(&d.lead())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(&r[i], &inv);
            if f.is_zero(&c) {
                continue;
            }
            q[i - dd] = c.clone();
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub(&r[i - dd + j], &f.mul(&c, dj));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).expect("nonzero divisor").1
    }

    /// Exact quotient; panics if `d` is zero.
    pub fn quo(&self, d: &Poly) -> Poly {
        self.div_rem(d).expect("nonzero divisor").0
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(&self.lead()).expect("nonzero lead");
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().enumerate().skip(1).map(|(i, c)| f.mul(&f.from_i64(i as i64), c)).collect())
    }

    pub fn eval(&self, a: &Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, a), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigInt, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.format(c);
            let cs = if cs.contains('+') || cs.contains('-') && i > 0 { format!("({cs})") } else { cs };
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(if i == 0 {
                cs
            } else if f.is_one(c) {
                mono
            } else {
                format!("{cs}*{mono}")
            });
        }
        terms.join(" + ")
    }
}

/// `f = unit * Π g^e` with each `g` monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let field = match self.factors.first() {
            Some((g, _)) => g.field().clone(),
            None => return Poly::zero(&Field::rational()),
        };
        let mut acc = Poly::constant(&field, self.unit.clone());
        for (g, e) in &self.factors {
            acc = acc.mul(&g.pow(*e));
        }
        acc
    }
}

/// Factors `f` into monic irreducibles over its coefficient field.
///
/// Over `Q` a part of degree 5 or more without rational roots cannot be
/// decided and yields `Error::Inconclusive`.
pub fn poly_factor(f: &Poly) -> Result<Factorization> {
    let field = f.field().clone();
    if f.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let unit = f.lead();
    let g = f.monic();
    let mut factors = if field.is_finite() { factor_finite(&g) } else { factor_rational(&g)? };
    factors.sort_by(|a, b| {
        (a.0.degree(), &a.0.coeffs, a.1).cmp(&(b.0.degree(), &b.0.coeffs, b.1))
    });
    Ok(Factorization { unit, factors })
}

/// Roots in the coefficient field with multiplicity. Always complete.
pub fn poly_roots(f: &Poly) -> Result<Vec<(Elem, u32)>> {
    let field = f.field().clone();
    if f.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has every element as a root".into()));
    }
    let g = f.monic();
    let linear: Vec<(Poly, u32)> = if field.is_finite() {
        factor_finite(&g)
    } else {
        let (lin, _) = rational_linear_factors(&g);
        lin
    };
    let mut roots: Vec<(Elem, u32)> = linear
        .into_iter()
        .filter(|(p, _)| p.degree() == Some(1))
        .map(|(p, e)| (field.neg(&p.coeff(0)), e))
        .collect();
    roots.sort();
    Ok(roots)
}

fn factor_finite(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    for (g, e) in squarefree(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d) {
                out.push((irr, e));
            }
        }
    }
    out
}

/// Squarefree decomposition of a monic polynomial over a finite field.
fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let field = f.field().clone();
    let p = field.characteristic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.quo(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.quo(&y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.quo(&w);
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root(&c);
        for (g, e) in squarefree(&root) {
            out.push((g, e * p));
        }
    }
    out
}

/// `c(x) = r(x)^p`; requires all exponents of `c` divisible by `p`.
fn pth_root(c: &Poly) -> Poly {
    let field = c.field().clone();
    let p = field.characteristic() as usize;
    let q = field.order().unwrap();
    // Inverse Frobenius is a -> a^(q/p).
    let e = q / p as u64;
    let coeffs = c.coeffs().iter().step_by(p).map(|a| field.pow(a, e)).collect();
    Poly::new(&field, coeffs)
}

/// Splits a squarefree monic polynomial into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field().clone();
    let q = BigInt::from(field.order().unwrap());
    let x = Poly::x(&field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(&q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.quo(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of degree `d`.
fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let field = f.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 1000 + d as u64);
    let q = field.order().unwrap();
    let p = field.characteristic();
    loop {
        let coeffs: Vec<Elem> = (0..n).map(|_| field.elem(rng.gen_range(0..q as u32))).collect();
        let a = Poly::new(&field, coeffs);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // Absolute trace to F_2: sum of a^(2^i), i < k*d.
            let steps = field.degree() as usize * d;
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((q^d-1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2).
            let qb = BigInt::from(q);
            let mut t = a.rem(f);
            let mut norm = t.clone();
            for _ in 1..d {
                t = t.pow_mod(&qb, f);
                norm = norm.mul(&t).rem(f);
            }
            norm.pow_mod(&BigInt::from((q - 1) / 2), f).sub(&Poly::one(&field))
        };
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.quo(&g), d));
            return out;
        }
    }
}

fn factor_rational(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let (mut out, rest) = rational_linear_factors(f);
    let Some(deg) = rest.degree() else { return Ok(out) };
    if deg == 0 {
        return Ok(out);
    }
    // `rest` has no rational roots; split off repeated parts first.
    let mut parts = Vec::new();
    let mut c = rest.gcd(&rest.derivative());
    let mut w = rest.quo(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.quo(&y);
        if !fac.is_one() {
            parts.push((fac, i));
        }
        w = y;
        c = c.quo(&w);
        i += 1;
    }
    for (g, e) in parts {
        match g.degree().unwrap() {
            0 => {}
            1..=3 => out.push((g, e)),
            4 => match kronecker_quadratic(&g) {
                Some(h) => {
                    out.push((h.clone(), e));
                    out.push((g.quo(&h).monic(), e));
                }
                None => out.push((g, e)),
            },
            dg => {
                return Err(Error::Inconclusive(format!(
                    "rational factor of degree {dg} without rational roots: {}",
                    g.format("x")
                )));
            }
        }
    }
    Ok(out)
}

/// Primitive integer coefficient vector of a rational polynomial.
fn integer_coeffs(f: &Poly) -> Vec<BigInt> {
    let field = f.field();
    let rats: Vec<&BigRational> = f.coeffs().iter().map(|c| field.as_rational(c).unwrap()).collect();
    let l = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|r| (r.numer() * &l) / r.denom()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Strips all rational roots, returning linear factors and the monic remainder.
fn rational_linear_factors(f: &Poly) -> (Vec<(Poly, u32)>, Poly) {
    let field = f.field().clone();
    let mut rest = f.monic();
    let mut out = Vec::new();
    // Zero as a root first.
    let mut zero_mult = 0;
    while rest.degree().unwrap_or(0) > 0 && field.is_zero(&rest.coeff(0)) {
        rest = rest.quo(&Poly::x(&field));
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Poly::x(&field), zero_mult));
    }
    if rest.degree().unwrap_or(0) == 0 {
        return (out, rest);
    }
    let ints = integer_coeffs(&rest);
    let c0 = ints[0].clone();
    let cn = ints.last().unwrap().clone();
    let mut candidates = Vec::new();
    for a in divisors(&c0) {
        for b in divisors(&cn) {
            for s in [1i64, -1] {
                let r = BigRational::new(&a * BigInt::from(s), b.clone());
                if !candidates.contains(&r) {
                    candidates.push(r);
                }
            }
        }
    }
    candidates.sort();
    for r in candidates {
        let root = Elem::Rat(r);
        let lin = Poly::linear_root(&field, &root);
        let mut m = 0;
        while rest.degree().unwrap_or(0) > 0 && field.is_zero(&rest.eval(&root)) {
            rest = rest.quo(&lin);
            m += 1;
        }
        if m > 0 {
            out.push((lin, m));
        }
    }
    (out, rest)
}

/// Looks for a monic rational quadratic factor of a degree-4 monic polynomial
/// by Kronecker's method at the points -1, 0, 1.
fn kronecker_quadratic(f: &Poly) -> Option<Poly> {
    let field = f.field().clone();
    let ints = integer_coeffs(f);
    let lead = ints.last().unwrap().clone();
    let ip = Poly::new(&field, ints.iter().map(|c| Elem::Rat(BigRational::from_integer(c.clone()))).collect());
    let pts = [-1i64, 0, 1];
    let vals: Vec<BigInt> = pts
        .iter()
        .map(|&x| {
            let v = ip.eval(&field.from_i64(x));
            field.as_rational(&v).unwrap().to_integer()
        })
        .collect();
    if vals.iter().any(|v| v.is_zero()) {
        return None;
    }
    let choices: Vec<Vec<BigInt>> = vals
        .iter()
        .map(|v| divisors(v).into_iter().flat_map(|d| [d.clone(), -d]).collect())
        .collect();
    for lead_div in divisors(&lead) {
        for a in &choices[0] {
            for b in &choices[1] {
                for c in &choices[2] {
                    // g(x) = u x^2 + v x + w with g(-1)=a, g(0)=b, g(1)=c.
                    let w = b.clone();
                    let two_u = a + c - BigInt::from(2) * b;
                    let two_v = c - a;
                    if !two_u.is_even() || !two_v.is_even() {
                        continue;
                    }
                    let u = two_u / 2;
                    if u != lead_div {
                        continue;
                    }
                    let v = two_v / 2;
                    let g = Poly::new(
                        &field,
                        [w, v, u].into_iter().map(|x| Elem::Rat(BigRational::from_integer(x))).collect(),
                    );
                    if g.degree() == Some(2) && ip.rem(&g).is_zero() {
                        return Some(g.monic());
                    }
                }
            }
        }
    }
    None
}

/// Minimal polynomial of a square matrix (given as a linear map on vectors).
pub fn minimal_polynomial(field: &Field, n: usize, apply: impl Fn(&[Elem]) -> Vec<Elem>) -> Poly {
    use crate::linalg::{unit_vector, Rref};
    // lcm over the Krylov minimal polynomials of the standard basis vectors.
    let mut acc = Poly::one(field);
    for i in 0..n {
        let mut krylov: Vec<Vec<Elem>> = vec![unit_vector(field, n, i)];
        // Find the first power that depends on the previous ones.
        loop {
            let next = apply(krylov.last().unwrap());
            let k = krylov.len();
            // Solve sum c_j krylov_j = next via a column system.
            let mut cols = krylov.clone();
            cols.push(next.clone());
            let rows: Vec<Vec<Elem>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            let r = Rref::from_vectors(field, k + 1, &rows);
            if r.pivots().contains(&k) {
                krylov.push(next);
                continue;
            }
            let mut coeffs: Vec<Elem> = vec![field.zero(); k + 1];
            for (row, &p) in r.basis().iter().zip(r.pivots()) {
                coeffs[p] = field.neg(&row[k]);
            }
            coeffs[k] = field.one();
            let m = Poly::new(field, coeffs);
            acc = lcm(&acc, &m);
            break;
        }
    }
    acc
}

/// Characteristic polynomial `det(x - M)` of a square matrix, via Hessenberg reduction.
pub fn characteristic_polynomial(field: &Field, m: &[Vec<Elem>]) -> Poly {
    let n = m.len();
    let mut h: Vec<Vec<Elem>> = m.to_vec();
    for k in 1..n.saturating_sub(1) {
        let Some(i) = (k..n).find(|&i| !field.is_zero(&h[i][k - 1])) else {
            continue;
        };
        if i != k {
            h.swap(i, k);
            for row in h.iter_mut() {
                row.swap(i, k);
            }
        }
        let t = field.inv(&h[k][k - 1]).expect("nonzero pivot");
        for j in k + 1..n {
            let u = field.mul(&h[j][k - 1], &t);
            if field.is_zero(&u) {
                continue;
            }
            for c in 0..n {
                let v = field.mul(&u, &h[k][c]);
                h[j][c] = field.sub(&h[j][c], &v);
            }
            for row in h.iter_mut() {
                let v = field.mul(&u, &row[j]);
                row[k] = field.add(&row[k], &v);
            }
        }
    }
    let mut p: Vec<Poly> = vec![Poly::one(field)];
    for k in 0..n {
        let lin = Poly::new(field, vec![field.neg(&h[k][k]), field.one()]);
        let mut next = lin.mul(&p[k]);
        let mut t = field.one();
        for i in (0..k).rev() {
            t = field.mul(&t, &h[i + 1][i]);
            let c = field.mul(&h[i][k], &t);
            next = next.sub(&p[i].scale(&c));
        }
        p.push(next);
    }
    p.pop().unwrap()
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    a.mul(b).quo(&a.gcd(b)).monic()
}

/// Integer value of a rational element, if it is one and fits in `i64`.
pub fn rational_to_i64(field: &Field, a: &Elem) -> Option<i64> {
    let r = field.as_rational(a)?;
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn x2_plus_x_over_f2() {
        let f = f2();
        let fac = poly_factor(&Poly::from_i64(&f, &[0, 1, 1])).unwrap();
        assert_eq!(fac.factors, vec![(Poly::from_i64(&f, &[0, 1]), 1), (Poly::from_i64(&f, &[1, 1]), 1)]);
    }

    #[test]
    fn x2_plus_x_plus_1_irreducible_over_f2() {
        let f = f2();
        let p = Poly::from_i64(&f, &[1, 1, 1]);
        assert_eq!(poly_factor(&p).unwrap().factors, vec![(p, 1)]);
    }

    #[test]
    fn x2_plus_x_plus_1_splits_over_f4() {
        let f = Field::finite(2, 2).unwrap();
        let t = f.generator_t();
        let t1 = f.add(&t, &f.one());
        let fac = poly_factor(&Poly::from_i64(&f, &[1, 1, 1])).unwrap();
        let mut expect = vec![
            (Poly::new(&f, vec![t.clone(), f.one()]), 1),
            (Poly::new(&f, vec![t1, f.one()]), 1),
        ];
        expect.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
        assert_eq!(fac.factors, expect);
    }

    #[test]
    fn repeated_factors_in_characteristic_p() {
        let f = Field::prime(3).unwrap();
        // (x+1)^3 (x^2+1) = x^5 + 3x^4 + 4x^3 + 4x^2 + 3x + 1
        let p = Poly::from_i64(&f, &[1, 1]).pow(3).mul(&Poly::from_i64(&f, &[1, 0, 1]));
        let fac = poly_factor(&p).unwrap();
        assert_eq!(fac.expand(), p);
        assert!(fac.factors.contains(&(Poly::from_i64(&f, &[1, 1]), 3)));
    }

    #[test]
    fn rational_cases() {
        let q = Field::rational();
        // (2x - 1)(x^2 + 1)
        let p = Poly::from_i64(&q, &[-1, 2, -1, 2]);
        let fac = poly_factor(&p).unwrap();
        assert_eq!(fac.expand(), p);
        assert_eq!(fac.factors.len(), 2);
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2)
        let p = Poly::from_i64(&q, &[4, 0, 0, 0, 1]);
        let fac = poly_factor(&p).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.expand(), p);
        // x^5 - x - 1 has no rational roots and is beyond the supported range.
        assert!(matches!(poly_factor(&Poly::from_i64(&q, &[-1, -1, 0, 0, 0, 1])), Err(Error::Inconclusive(_))));
        let roots = poly_roots(&Poly::from_i64(&q, &[-1, -1, 0, 0, 0, 1])).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn characteristic_polynomial_matches_determinant() {
        let q = Field::rational();
        let m: Vec<Vec<Elem>> =
            [[2, 1, 0], [1, 3, 1], [4, 0, 5]].iter().map(|r| r.iter().map(|&v| q.from_i64(v)).collect()).collect();
        // trace 10, principal minors 5 + 10 + 15, determinant 29.
        assert_eq!(characteristic_polynomial(&q, &m), Poly::from_i64(&q, &[-29, 30, -10, 1]));
        let z: Vec<Vec<Elem>> = vec![vec![q.zero(); 2]; 2];
        assert_eq!(characteristic_polynomial(&q, &z), Poly::from_i64(&q, &[0, 0, 1]));
    }

    #[test]
    fn minimal_polynomial_of_swap() {
        let f = Field::prime(3).unwrap();
        let m = minimal_polynomial(&f, 2, |v| vec![v[1].clone(), v[0].clone()]);
        assert_eq!(m, Poly::from_i64(&f, &[-1, 0, 1]));
    }

    fn finite_poly() -> impl Strategy<Value = Poly> {
        (0usize..4, prop::collection::vec(0u32..64, 1..9)).prop_map(|(which, cs)| {
            let f = [(2, 1), (3, 1), (2, 2), (5, 1)][which];
            let field = Field::finite(f.0, f.1).unwrap();
            let q = field.order().unwrap() as u32;
            let mut coeffs: Vec<Elem> = cs.iter().map(|c| field.elem(c % q)).collect();
            coeffs.push(field.one());
            Poly::new(&field, coeffs)
        })
    }

    proptest! {
        #[test]
        fn factors_reexpand_to_input(p in finite_poly()) {
            let fac = poly_factor(&p).unwrap();
            prop_assert_eq!(fac.expand(), p);
            for (g, _) in &fac.factors {
                // Irreducible: no proper factor found by distinct-degree splitting.
                let dd = distinct_degree(g);
                prop_assert_eq!(dd.len(), 1);
                prop_assert_eq!(dd[0].1, g.degree().unwrap());
            }
        }

        #[test]
        fn rational_quartics_reexpand(cs in prop::collection::vec(-5i64..6, 4)) {
            let q = Field::rational();
            let mut c = cs.clone();
            c.push(1);
            let p = Poly::from_i64(&q, &c);
            let fac = poly_factor(&p).unwrap();
            prop_assert_eq!(fac.expand(), p);
        }
    }
}
