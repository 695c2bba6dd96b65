//! Exact scalar fields: the rationals and finite fields `F_{p^k}`.
//!
//! Finite-field elements are polynomial residues modulo a monic irreducible
//! polynomial over `F_p`, packed into a `u32` as the base-`p` digits of the
//! coefficient vector (constant term least significant). Multiplication goes
//! through discrete log/exp tables built once per field and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest supported finite field order.
pub const MAX_FINITE_ORDER: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Finite,
}

/// Description of a field: `Q`, or `F_p[t]/(f)` with `f` monic irreducible of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub kind: FieldKind,
    pub p: u32,
    pub k: u32,
    /// Coefficients of the defining polynomial, constant term first, length `k + 1`.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec { kind: FieldKind::Rational, p: 0, k: 1, modulus: Vec::new() }
    }

    /// `F_{p^k}` with the default defining polynomial: the monic irreducible
    /// polynomial of degree `k` whose lower coefficients, read as base-`p`
    /// digits with the constant term least significant, form the smallest number.
    pub fn finite(p: u32, k: u32) -> Result<Self> {
        check_prime_power(p, k)?;
        let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(p, k) };
        Ok(FieldSpec { kind: FieldKind::Finite, p, k, modulus })
    }

    pub fn finite_with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("defining polynomial must have degree >= 1".into()));
        }
        let k = (modulus.len() - 1) as u32;
        check_prime_power(p, k)?;
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("defining polynomial must be monic with coefficients in F_p".into()));
        }
        if k > 1 && !is_irreducible_mod_p(&modulus, p) {
            return Err(Error::InvalidField(format!("{:?} is reducible over F_{p}", modulus)));
        }
        Ok(FieldSpec { kind: FieldKind::Finite, p, k, modulus })
    }

    pub fn order(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Rational => None,
            FieldKind::Finite => Some((self.p as u64).pow(self.k)),
        }
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_prime_power(p: u32, k: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidField("extension degree must be >= 1".into()));
    }
    match (p as u64).checked_pow(k) {
        Some(q) if q <= MAX_FINITE_ORDER => Ok(()),
        _ => Err(Error::InvalidField(format!("F_{{{p}^{k}}} exceeds the supported order {MAX_FINITE_ORDER}"))),
    }
}

// Small dense polynomial helpers over F_p used only for table construction.

fn trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn rem_mod_p(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if db == 0 {
        return vec![0];
    }
    let p64 = p as u64;
    let lead_inv = inv_mod(b[db], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    for i in (db..r.len()).rev() {
        let c = r[i] % p64 * lead_inv % p64;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            let idx = i - db + j;
            r[idx] = (r[idx] + (p64 - c) * bj as u64) % p64;
        }
    }
    r.truncate(db);
    if r.is_empty() {
        r.push(0);
    }
    r.into_iter().map(|c| (c % p64) as u32).collect()
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn is_irreducible_mod_p(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    // Trial division by every monic polynomial of degree 1..=k/2.
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut g = digits(code as u32, p, d);
            g.push(1);
            let r = rem_mod_p(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn digits(mut code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut f = digits(code as u32, p, k as usize);
        f.push(1);
        if f[0] != 0 && is_irreducible_mod_p(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

struct FiniteTables {
    order: u32,
    /// `exp[i] = g^i` for `i < order - 1`.
    exp: Vec<u32>,
    /// `log[code]` for nonzero codes.
    log: Vec<u32>,
    /// `p^i` for digit extraction.
    powers: Vec<u32>,
}

impl FiniteTables {
    fn build(spec: &FieldSpec) -> Self {
        let p = spec.p;
        let k = spec.k as usize;
        let order = (p as u64).pow(spec.k) as u32;
        let powers: Vec<u32> = (0..k).map(|i| p.pow(i as u32)).collect();
        let encode = |v: &[u32]| -> u32 { v.iter().zip(&powers).map(|(c, w)| c * w).sum() };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = digits(a, p, k);
            let db = digits(b, p, k);
            let mut prod = vec![0u32; 2 * k];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let mut r = rem_mod_p(&prod, &spec.modulus, p);
            r.resize(k, 0);
            encode(&r)
        };
        let n = order - 1;
        for candidate in 1..order {
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..n {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = slow_mul(x, candidate);
            }
            if ok && x == 1 {
                let mut log = vec![0u32; order as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                return FiniteTables { order, exp, log, powers };
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

struct FieldInner {
    spec: FieldSpec,
    tables: Option<FiniteTables>,
}

/// A shared handle to a field together with its arithmetic tables.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.name())
    }
}

/// Scalars. Which variant is valid depends on the owning [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fin(u32),
    Rat(BigRational),
}

fn registry() -> &'static Mutex<HashMap<FieldSpec, Field>> {
    static REG: OnceLock<Mutex<HashMap<FieldSpec, Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    pub fn from_spec(spec: FieldSpec) -> Result<Field> {
        if spec.kind == FieldKind::Finite {
            FieldSpec::finite_with_modulus(spec.p, spec.modulus.clone())?;
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        if let Some(f) = reg.get(&spec) {
            return Ok(f.clone());
        }
        let tables = match spec.kind {
            FieldKind::Rational => None,
            FieldKind::Finite => Some(FiniteTables::build(&spec)),
        };
        let field = Field(Arc::new(FieldInner { spec: spec.clone(), tables }));
        reg.insert(spec, field.clone());
        Ok(field)
    }

    pub fn rational() -> Field {
        Field::from_spec(FieldSpec::rational()).expect("Q is always valid")
    }

    pub fn finite(p: u32, k: u32) -> Result<Field> {
        Field::from_spec(FieldSpec::finite(p, k)?)
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::finite(p, 1)
    }

    /// Parses `Q`, `F5`, `F9`, `F2^3` style names.
    pub fn parse(name: &str) -> Result<Field> {
        let s = name.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::rational());
        }
        let rest = s
            .strip_prefix('F')
            .or_else(|| s.strip_prefix('f'))
            .ok_or_else(|| Error::InvalidField(format!("unrecognized field name {s:?}")))?;
        let bad = || Error::InvalidField(format!("unrecognized field name {s:?}"));
        if let Some((p, k)) = rest.split_once('^') {
            let p: u32 = p.parse().map_err(|_| bad())?;
            let k: u32 = k.parse().map_err(|_| bad())?;
            return Field::finite(p, k);
        }
        let q: u64 = rest.parse().map_err(|_| bad())?;
        for p in 2..=q.min(MAX_FINITE_ORDER) as u32 {
            if q % p as u64 == 0 {
                let mut k = 0;
                let mut r = q;
                while r % p as u64 == 0 {
                    r /= p as u64;
                    k += 1;
                }
                if r != 1 {
                    return Err(bad());
                }
                return Field::finite(p, k);
            }
        }
        Err(bad())
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn kind(&self) -> FieldKind {
        self.0.spec.kind
    }

    pub fn is_finite(&self) -> bool {
        self.kind() == FieldKind::Finite
    }

    pub fn characteristic(&self) -> u32 {
        self.0.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.0.spec.k
    }

    pub fn order(&self) -> Option<u64> {
        self.0.spec.order()
    }

    pub fn name(&self) -> String {
        match self.kind() {
            FieldKind::Rational => "Q".to_string(),
            FieldKind::Finite => match self.order() {
                Some(q) => format!("F{q}"),
                None => unreachable!(),
            },
        }
    }

    fn tables(&self) -> &FiniteTables {
        self.0.tables.as_ref().expect("finite field tables")
    }

    pub fn zero(&self) -> Elem {
        match self.kind() {
            FieldKind::Rational => Elem::Rat(BigRational::zero()),
            FieldKind::Finite => Elem::Fin(0),
        }
    }

    pub fn one(&self) -> Elem {
        match self.kind() {
            FieldKind::Rational => Elem::Rat(BigRational::one()),
            FieldKind::Finite => Elem::Fin(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match self.kind() {
            FieldKind::Rational => Elem::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldKind::Finite => {
                let p = self.characteristic() as i64;
                Elem::Fin(n.rem_euclid(p) as u32)
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Elem> {
        let d = self.from_i64(den);
        let inv = self.inv(&d)?;
        Ok(self.mul(&self.from_i64(num), &inv))
    }

    /// Finite-field element from its packed code.
    pub fn elem(&self, code: u32) -> Elem {
        debug_assert!(self.is_finite() && (code as u64) < self.order().unwrap());
        Elem::Fin(code)
    }

    /// Whether `a` is a valid element of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (self.kind(), a) {
            (FieldKind::Rational, Elem::Rat(_)) => true,
            (FieldKind::Finite, Elem::Fin(c)) => (*c as u64) < self.order().unwrap(),
            _ => false,
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(c) => *c == 0,
            Elem::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(c) => *c == 1,
            Elem::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(self.fin_add(*x, *y, false)),
            _ => panic!("mixed scalar representations"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x - y),
            (Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(self.fin_add(*x, *y, true)),
            _ => panic!("mixed scalar representations"),
        }
    }

    fn fin_add(&self, x: u32, y: u32, subtract: bool) -> u32 {
        let p = self.characteristic();
        if p == 2 {
            return x ^ y;
        }
        if self.degree() == 1 {
            return if subtract { (x + p - y) % p } else { (x + y) % p };
        }
        let t = self.tables();
        let (mut a, mut b) = (x, y);
        let mut out = 0;
        for &w in &t.powers {
            let da = a % p;
            let db = b % p;
            a /= p;
            b /= p;
            let d = if subtract { (da + p - db) % p } else { (da + db) % p };
            out += d * w;
        }
        out
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (Elem::Fin(x), Elem::Fin(y)) => {
                if *x == 0 || *y == 0 {
                    return Elem::Fin(0);
                }
                let t = self.tables();
                let n = t.order - 1;
                let l = (t.log[*x as usize] + t.log[*y as usize]) % n;
                Elem::Fin(t.exp[l as usize])
            }
            _ => panic!("mixed scalar representations"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match a {
            Elem::Rat(x) => Elem::Rat(x.recip()),
            Elem::Fin(x) => {
                let t = self.tables();
                let n = t.order - 1;
                let l = (n - t.log[*x as usize]) % n;
                Elem::Fin(t.exp[l as usize])
            }
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        if let Elem::Fin(x) = a {
            if *x == 0 {
                return if e == 0 { self.one() } else { self.zero() };
            }
            let t = self.tables();
            let n = (t.order - 1) as u64;
            let l = (t.log[*x as usize] as u64 * (e % n)) % n;
            return Elem::Fin(t.exp[l as usize]);
        }
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// The Frobenius power `a ↦ a^q`, where `q` is the order of a subfield.
    pub fn frobenius(&self, a: &Elem, q: u64) -> Result<Elem> {
        if !self.is_finite() {
            return Err(Error::InvalidField("Frobenius requires a finite field".into()));
        }
        if !self.is_subfield_order(q) {
            return Err(Error::InvalidField(format!("{q} is not the order of a subfield of {}", self.name())));
        }
        Ok(self.pow(a, q))
    }

    /// Whether `q = p^j` with `j | k`.
    pub fn is_subfield_order(&self, q: u64) -> bool {
        let p = self.characteristic() as u64;
        let mut j = 0;
        let mut r = q;
        while r > 1 && r % p == 0 {
            r /= p;
            j += 1;
        }
        r == 1 && j >= 1 && self.degree() % j == 0
    }

    /// All elements in code order (finite fields only).
    pub fn elements(&self) -> Vec<Elem> {
        let q = self.order().expect("finite field");
        (0..q as u32).map(Elem::Fin).collect()
    }

    /// Coefficients of a finite-field element in the power basis over `F_p`.
    pub fn coords_over_prime(&self, a: &Elem) -> Vec<u32> {
        match a {
            Elem::Fin(c) => digits(*c, self.characteristic(), self.degree() as usize),
            Elem::Rat(_) => panic!("rational element has no F_p coordinates"),
        }
    }

    pub fn from_prime_coords(&self, coords: &[u32]) -> Elem {
        let t = self.tables();
        Elem::Fin(coords.iter().zip(&t.powers).map(|(c, w)| c * w).sum())
    }

    /// A rational element, if this is `Q`.
    pub fn as_rational<'a>(&self, a: &'a Elem) -> Option<&'a BigRational> {
        match a {
            Elem::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn format(&self, a: &Elem) -> String {
        match a {
            Elem::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Elem::Fin(c) => {
                if self.degree() == 1 {
                    return c.to_string();
                }
                let ds = digits(*c, self.characteristic(), self.degree() as usize);
                let mut terms = Vec::new();
                for (i, &d) in ds.iter().enumerate().rev() {
                    if d == 0 {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => "t".to_string(),
                        _ => format!("t^{i}"),
                    };
                    terms.push(match (d, i) {
                        (_, 0) => d.to_string(),
                        (1, _) => mono,
                        _ => format!("{d}{mono}"),
                    });
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
        }
    }

    /// Parses an integer, `a/b`, or (for extension fields) a polynomial in `t` such as `t^2+2t+1`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse {s:?} as an element of {}", self.name()));
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            return self.from_ratio(n, d);
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_i64(n));
        }
        if !self.is_finite() {
            return Err(bad());
        }
        let mut acc = self.zero();
        let t = self.generator_t();
        for term in s.split('+') {
            let term = term.trim();
            let (coef, rest) = match term.find('t') {
                Some(pos) => (&term[..pos], &term[pos + 1..]),
                None => {
                    let c: i64 = term.parse().map_err(|_| bad())?;
                    acc = self.add(&acc, &self.from_i64(c));
                    continue;
                }
            };
            let c = if coef.is_empty() { 1 } else { coef.parse::<i64>().map_err(|_| bad())? };
            let e = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?
            };
            acc = self.add(&acc, &self.mul(&self.from_i64(c), &self.pow(&t, e)));
        }
        Ok(acc)
    }

    /// The class of `t` in `F_p[t]/(f)`.
    pub fn generator_t(&self) -> Elem {
        if self.degree() == 1 {
            // t is a root of x - 0 = x in the default modulus; use 0 for k = 1.
            let m = &self.spec().modulus;
            return self.from_i64(-(m[0] as i64));
        }
        Elem::Fin(self.characteristic())
    }
}

/// A field element bundled with its field, for checked arithmetic across
/// possibly different fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    pub field: Field,
    pub value: Elem,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Neg,
}

impl FieldElem {
    pub fn new(field: &Field, value: Elem) -> Result<Self> {
        if !field.contains(&value) {
            return Err(Error::InvalidField(format!("{value:?} is not an element of {}", field.name())));
        }
        Ok(FieldElem { field: field.clone(), value })
    }

    /// Applies `op`; binary operations use `other`, unary ones ignore it.
    pub fn apply(&self, op: FieldOp, other: Option<&FieldElem>) -> Result<FieldElem> {
        let f = &self.field;
        let binary = |o: Option<&FieldElem>| -> Result<Elem> {
            let o = o.ok_or_else(|| Error::InvalidInput("binary operation needs two operands".into()))?;
            if o.field != *f {
                return Err(Error::MixedFields(f.name(), o.field.name()));
            }
            Ok(o.value.clone())
        };
        let value = match op {
            FieldOp::Add => f.add(&self.value, &binary(other)?),
            FieldOp::Mul => f.mul(&self.value, &binary(other)?),
            FieldOp::Inv => f.inv(&self.value)?,
            FieldOp::Neg => f.neg(&self.value),
        };
        Ok(FieldElem { field: f.clone(), value })
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(&self.value))
    }
}

/// A field embedding `F_{p^j} ⊂ F_{p^k}`, `j | k`, sending `t` to the
/// smallest-code root of the subfield's defining polynomial.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub base: Field,
    pub top: Field,
    images: Vec<u32>,
    preimages: HashMap<u32, u32>,
}

impl Embedding {
    pub fn new(base: &Field, top: &Field) -> Result<Embedding> {
        if !base.is_finite() || !top.is_finite() || base.characteristic() != top.characteristic() {
            return Err(Error::InvalidField(format!("no embedding {} -> {}", base.name(), top.name())));
        }
        if top.degree() % base.degree() != 0 {
            return Err(Error::InvalidField(format!("{} is not a subfield of {}", base.name(), top.name())));
        }
        let p = base.characteristic();
        let modulus = &base.spec().modulus;
        let eval = |x: &Elem| -> Elem {
            let mut acc = top.zero();
            for &c in modulus.iter().rev() {
                acc = top.add(&top.mul(&acc, x), &top.from_i64(c as i64));
            }
            acc
        };
        let root = top
            .elements()
            .into_iter()
            .find(|x| top.is_zero(&eval(x)))
            .ok_or_else(|| Error::InvalidField("subfield polynomial has no root".into()))?;
        let q = base.order().unwrap() as u32;
        let mut images = Vec::with_capacity(q as usize);
        let mut preimages = HashMap::new();
        for code in 0..q {
            let ds = digits(code, p, base.degree() as usize);
            let mut acc = top.zero();
            for &d in ds.iter().rev() {
                acc = top.add(&top.mul(&acc, &root), &top.from_i64(d as i64));
            }
            let Elem::Fin(img) = acc else { unreachable!() };
            images.push(img);
            preimages.insert(img, code);
        }
        Ok(Embedding { base: base.clone(), top: top.clone(), images, preimages })
    }

    pub fn embed(&self, a: &Elem) -> Elem {
        match a {
            Elem::Fin(c) => Elem::Fin(self.images[*c as usize]),
            Elem::Rat(_) => panic!("rational element in finite embedding"),
        }
    }

    /// The preimage of `a`, if `a` lies in the image of the base field.
    pub fn pull_back(&self, a: &Elem) -> Option<Elem> {
        match a {
            Elem::Fin(c) => self.preimages.get(c).map(|&b| Elem::Fin(b)),
            Elem::Rat(_) => None,
        }
    }
}

/// Rational number helper for tests and parsers.
pub fn rational(num: i64, den: i64) -> Elem {
    Elem::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
}
