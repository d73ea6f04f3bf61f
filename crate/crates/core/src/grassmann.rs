//! Finite Grassmann algebra with involution.
//!
//! Elements are sparse maps from generator-subset masks to complex
//! coefficients. A monomial is stored in canonical order (ascending generator
//! index) with its reordering sign absorbed into the coefficient, so two
//! elements are equal exactly when their term maps agree.
//!
//! Generators live in a [`GeneratorPool`]. Every element remembers the id of
//! the pool it was built over; mixing elements of different pools is an
//! error. A pool only ever grows, so intermediate integration variables can be
//! allocated while existing elements stay valid.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are treated as exact zeros.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Upper bound on the number of generators in one pool.
pub const MAX_GENERATORS: usize = 128;

pub type Mask = u128;

static NEXT_POOL_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoolId(u64);

/// Index of a generator inside its pool. The index is its position in the
/// global total order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub u32);

impl GenId {
    #[inline]
    pub fn bit(self) -> Mask {
        1u128 << self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub conjugate: Option<GenId>,
}

/// Registry of named, ordered anticommuting generators.
///
/// Clones share the pool id; allocate only on one copy.
#[derive(Debug, Clone)]
pub struct GeneratorPool {
    id: PoolId,
    gens: Vec<Generator>,
}

impl Default for GeneratorPool {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneratorPool {
    pub fn new() -> Self {
        Self {
            id: PoolId(NEXT_POOL_ID.fetch_add(1, Ordering::Relaxed)),
            gens: Vec::new(),
        }
    }

    pub fn id(&self) -> PoolId {
        self.id
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.gens[g.index()]
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.gens[g.index()].name
    }

    pub fn conjugate(&self, g: GenId) -> Option<GenId> {
        self.gens[g.index()].conjugate
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .map(|i| GenId(i as u32))
    }

    /// Allocates an unpaired generator.
    pub fn alloc(&mut self, name: impl Into<String>) -> Result<GenId> {
        if self.gens.len() >= MAX_GENERATORS {
            return Err(Error::PoolExhausted(MAX_GENERATORS));
        }
        let id = GenId(self.gens.len() as u32);
        self.gens.push(Generator {
            name: name.into(),
            conjugate: None,
        });
        Ok(id)
    }

    /// Allocates an involution pair and returns `(g, g*)`.
    pub fn alloc_pair(
        &mut self,
        name: impl Into<String>,
        conj_name: impl Into<String>,
    ) -> Result<(GenId, GenId)> {
        let a = self.alloc(name)?;
        let b = self.alloc(conj_name)?;
        self.pair(a, b);
        Ok((a, b))
    }

    /// Declares `a` and `b` conjugate to each other.
    pub fn pair(&mut self, a: GenId, b: GenId) {
        self.gens[a.index()].conjugate = Some(b);
        self.gens[b.index()].conjugate = Some(a);
    }

    pub fn zero(&self) -> Grassmann {
        Grassmann::zero(self.id)
    }

    pub fn one(&self) -> Grassmann {
        Grassmann::scalar(self.id, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(&self, c: Complex64) -> Grassmann {
        Grassmann::scalar(self.id, c)
    }

    pub fn gen(&self, g: GenId) -> Grassmann {
        assert!(g.index() < self.gens.len(), "generator outside pool");
        Grassmann::monomial(self.id, g.bit(), Complex64::new(1.0, 0.0))
    }

    /// The product `g1 g2 ... gk` in the given (not necessarily canonical) order.
    pub fn product(&self, gens: &[GenId]) -> Grassmann {
        let mut mask: Mask = 0;
        let mut sign = 1.0;
        for g in gens {
            if mask & g.bit() != 0 {
                return self.zero();
            }
            if (mask >> (g.0 + 1)).count_ones() % 2 == 1 {
                sign = -sign;
            }
            mask |= g.bit();
        }
        Grassmann::monomial(self.id, mask, Complex64::new(sign, 0.0))
    }

    fn check(&self, x: &Grassmann) -> Result<()> {
        if x.pool != self.id {
            Err(Error::PoolMismatch)
        } else {
            Ok(())
        }
    }

    /// Antilinear antihomomorphism mapping every generator to its conjugate.
    pub fn involution(&self, x: &Grassmann) -> Result<Grassmann> {
        self.check(x)?;
        let mut out = self.zero();
        for (&mask, &c) in &x.terms {
            let mut gens = Vec::with_capacity(mask.count_ones() as usize);
            for g in bits(mask).rev() {
                let conj = self.conjugate(g).ok_or_else(|| {
                    Error::UnpairedGenerator(self.name(g).to_string())
                })?;
                gens.push(conj);
            }
            let mono = self.product(&gens);
            out.add_scaled(&mono, c.conj());
        }
        Ok(out)
    }

    /// Canonical text rendering: terms sorted by (degree, mask), each as
    /// `coeff*g1^g2^...`, the empty monomial rendered by its coefficient alone.
    pub fn render(&self, x: &Grassmann) -> String {
        render_terms(x, |g| self.name(g).to_string())
    }
}

/// Iterates the generators of a mask in ascending order.
pub fn bits(mask: Mask) -> impl DoubleEndedIterator<Item = GenId> {
    (0..128u32)
        .filter(move |i| mask & (1u128 << i) != 0)
        .map(GenId)
}

/// Sign of the product of two canonical monomials `a * b` brought to
/// canonical order; `None` when they share a generator.
#[inline]
pub fn merge_sign(a: Mask, b: Mask) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // generators of `a` above j must move past this one
        let above = if j == 127 { 0 } else { a >> (j + 1) };
        swaps += above.count_ones();
    }
    Some(if swaps % 2 == 0 { 1.0 } else { -1.0 })
}

/// Element of a finite Grassmann algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Grassmann {
    pool: PoolId,
    terms: BTreeMap<Mask, Complex64>,
}

impl Grassmann {
    pub fn zero(pool: PoolId) -> Self {
        Self {
            pool,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(pool: PoolId, c: Complex64) -> Self {
        Self::monomial(pool, 0, c)
    }

    pub fn monomial(pool: PoolId, mask: Mask, c: Complex64) -> Self {
        let mut x = Self::zero(pool);
        if c.norm() >= ZERO_THRESHOLD {
            x.terms.insert(mask, c);
        }
        x
    }

    pub fn from_terms(pool: PoolId, terms: impl IntoIterator<Item = (Mask, Complex64)>) -> Self {
        let mut x = Self::zero(pool);
        for (m, c) in terms {
            x.add_term(m, c);
        }
        x.prune();
        x
    }

    pub fn pool(&self) -> PoolId {
        self.pool
    }

    pub fn terms(&self) -> &BTreeMap<Mask, Complex64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, mask: Mask) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coeff(0)
    }

    /// Union of all generators that occur in some monomial.
    pub fn support(&self) -> Mask {
        self.terms.keys().fold(0, |acc, m| acc | m)
    }

    /// Parity (0 even, 1 odd) when every monomial shares one.
    pub fn parity(&self) -> Option<u32> {
        let mut p = None;
        for m in self.terms.keys() {
            let q = m.count_ones() % 2;
            match p {
                None => p = Some(q),
                Some(prev) if prev != q => return None,
                _ => {}
            }
        }
        Some(p.unwrap_or(0))
    }

    fn add_term(&mut self, mask: Mask, c: Complex64) {
        *self.terms.entry(mask).or_default() += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= ZERO_THRESHOLD);
    }

    fn add_scaled(&mut self, other: &Grassmann, s: Complex64) {
        for (&m, &c) in &other.terms {
            self.add_term(m, c * s);
        }
        self.prune();
    }

    pub fn scale(&self, s: Complex64) -> Grassmann {
        let mut out = Grassmann::zero(self.pool);
        out.add_scaled(self, s);
        out
    }

    pub fn scale_re(&self, s: f64) -> Grassmann {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn checked_add(&self, other: &Grassmann) -> Result<Grassmann> {
        if self.pool != other.pool {
            return Err(Error::PoolMismatch);
        }
        let mut out = self.clone();
        out.add_scaled(other, Complex64::new(1.0, 0.0));
        Ok(out)
    }

    /// Algebra product.
    pub fn checked_mul(&self, other: &Grassmann) -> Result<Grassmann> {
        if self.pool != other.pool {
            return Err(Error::PoolMismatch);
        }
        let mut out = Grassmann::zero(self.pool);
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                if let Some(sign) = merge_sign(ma, mb) {
                    out.add_term(ma | mb, ca * cb * sign);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Splits into even and odd parts.
    pub fn parity_split(&self) -> (Grassmann, Grassmann) {
        let mut even = Grassmann::zero(self.pool);
        let mut odd = Grassmann::zero(self.pool);
        for (&m, &c) in &self.terms {
            if m.count_ones() % 2 == 0 {
                even.terms.insert(m, c);
            } else {
                odd.terms.insert(m, c);
            }
        }
        (even, odd)
    }

    pub fn even_part(&self) -> Grassmann {
        self.parity_split().0
    }

    pub fn odd_part(&self) -> Grassmann {
        self.parity_split().1
    }

    /// Left derivative: anticommute `g` to the front, then drop it.
    pub fn left_derivative(&self, g: GenId) -> Grassmann {
        let bit = g.bit();
        let below = bit - 1;
        let mut out = Grassmann::zero(self.pool);
        for (&m, &c) in &self.terms {
            if m & bit != 0 {
                let sign = if (m & below).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                out.terms.insert(m & !bit, c * sign);
            }
        }
        out
    }

    /// Iterated Berezin integral over `gens`, read as the measure
    /// `d g1 d g2 ... d gk`: the rightmost variable is integrated first.
    /// A single integral is the left derivative, so `∫ θ dθ = 1`.
    pub fn berezin(&self, gens: &[GenId]) -> Grassmann {
        let mut x = self.clone();
        for &g in gens.iter().rev() {
            x = x.left_derivative(g);
        }
        x
    }

    /// Keeps only monomials free of every generator in `mask`.
    pub fn drop_containing(&self, mask: Mask) -> Grassmann {
        Grassmann {
            pool: self.pool,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| **m & mask == 0)
                .map(|(m, c)| (*m, *c))
                .collect(),
        }
    }

    /// Substitutes `g -> -g` for every generator in `mask`.
    pub fn flip_sign(&self, mask: Mask) -> Grassmann {
        Grassmann {
            pool: self.pool,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if (m & mask).count_ones() % 2 == 1 {
                        (*m, -*c)
                    } else {
                        (*m, *c)
                    }
                })
                .collect(),
        }
    }

    /// Rewrites the element over another pool by renaming every generator
    /// through `map`. Renaming is an algebra homomorphism, so monomials are
    /// re-canonicalized with their reordering sign.
    pub fn transplant(&self, target: PoolId, map: impl Fn(GenId) -> GenId) -> Grassmann {
        let mut out = Grassmann::zero(target);
        for (&m, &c) in &self.terms {
            let mut mask: Mask = 0;
            let mut sign = 1.0;
            let mut collapsed = false;
            for g in bits(m) {
                let h = map(g);
                if mask & h.bit() != 0 {
                    collapsed = true;
                    break;
                }
                if (mask >> (h.0 + 1)).count_ones() % 2 == 1 {
                    sign = -sign;
                }
                mask |= h.bit();
            }
            if !collapsed {
                out.add_term(mask, c * sign);
            }
        }
        out.prune();
        out
    }

    /// Nilpotent exponential. A scalar part `s` factors out as `e^s`.
    pub fn exp(&self) -> Grassmann {
        let s = self.scalar_part();
        let mut nil = self.clone();
        nil.terms.remove(&0);
        let mut sum = Grassmann::scalar(self.pool, Complex64::new(1.0, 0.0));
        let mut power = sum.clone();
        let mut k = 1.0;
        loop {
            // power holds nil^k / k!
            power = (&power * &nil).scale_re(1.0 / k);
            if power.is_zero() {
                break;
            }
            sum += &power;
            k += 1.0;
        }
        sum.scale(s.exp())
    }

    /// Logarithm of an element with nonzero scalar part, by the Mercator
    /// series of the nilpotent remainder (finite).
    pub fn ln(&self) -> Result<Grassmann> {
        let s = self.scalar_part();
        if s.norm() < ZERO_THRESHOLD {
            return Err(Error::NoLogarithm);
        }
        let mut u = self.scale(s.inv());
        u.terms.remove(&0);
        let mut sum = Grassmann::scalar(self.pool, s.ln());
        let mut power = Grassmann::scalar(self.pool, Complex64::new(1.0, 0.0));
        let mut k = 1.0;
        loop {
            power = &power * &u;
            if power.is_zero() {
                break;
            }
            let sign = if (k as u64) % 2 == 1 { 1.0 } else { -1.0 };
            sum.add_scaled(&power, Complex64::new(sign / k, 0.0));
            k += 1.0;
        }
        Ok(sum)
    }

    /// Largest coefficient-wise deviation from `other`, pool ids ignored.
    pub fn max_deviation(&self, other: &Grassmann) -> f64 {
        let mut worst: f64 = 0.0;
        for (m, c) in &self.terms {
            worst = worst.max((c - other.coeff(*m)).norm());
        }
        for (m, c) in &other.terms {
            if !self.terms.contains_key(m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.norm()))
    }

    /// Approximate equality, coefficient-wise.
    pub fn approx_eq(&self, other: &Grassmann, tol: f64) -> bool {
        self.max_deviation(other) < tol
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&Grassmann> for &Grassmann {
            type Output = Grassmann;
            fn $f(self, rhs: &Grassmann) -> Grassmann {
                let f: fn(&Grassmann, &Grassmann) -> Grassmann = $body;
                f(self, rhs)
            }
        }
        impl $tr<Grassmann> for Grassmann {
            type Output = Grassmann;
            fn $f(self, rhs: Grassmann) -> Grassmann {
                $tr::$f(&self, &rhs)
            }
        }
        impl $tr<&Grassmann> for Grassmann {
            type Output = Grassmann;
            fn $f(self, rhs: &Grassmann) -> Grassmann {
                $tr::$f(&self, rhs)
            }
        }
        impl $tr<Grassmann> for &Grassmann {
            type Output = Grassmann;
            fn $f(self, rhs: Grassmann) -> Grassmann {
                $tr::$f(self, &rhs)
            }
        }
    };
}

// Operator forms panic on pool mismatch; use the checked_* methods to get an error.
binop!(Add, add, |a, b| a.checked_add(b).expect("incompatible algebras"));
binop!(Sub, sub, |a, b| a
    .checked_add(&b.scale_re(-1.0))
    .expect("incompatible algebras"));
binop!(Mul, mul, |a, b| a.checked_mul(b).expect("incompatible algebras"));

impl AddAssign<&Grassmann> for Grassmann {
    fn add_assign(&mut self, rhs: &Grassmann) {
        assert_eq!(self.pool, rhs.pool, "incompatible algebras");
        self.add_scaled(rhs, Complex64::new(1.0, 0.0));
    }
}

impl Neg for &Grassmann {
    type Output = Grassmann;
    fn neg(self) -> Grassmann {
        self.scale_re(-1.0)
    }
}

impl Neg for Grassmann {
    type Output = Grassmann;
    fn neg(self) -> Grassmann {
        self.scale_re(-1.0)
    }
}

/// Formats a real number with 12 significant digits, trailing zeros trimmed.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", v);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, v);
        trim_zeros(&s)
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" { "0".into() } else { t.into() }
    } else {
        s.into()
    }
}

/// `a`, `bi`, or `(a+bi)` depending on which parts are nonzero.
pub fn fmt_complex(c: Complex64) -> String {
    let re = fmt_real(c.re);
    let im = fmt_real(c.im);
    if im == "0" {
        re
    } else if re == "0" {
        format!("{im}i")
    } else if im.starts_with('-') {
        format!("({re}{im}i)")
    } else {
        format!("({re}+{im}i)")
    }
}

pub(crate) fn render_terms(x: &Grassmann, name: impl Fn(GenId) -> String) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut items: Vec<(&Mask, &Complex64)> = x.terms.iter().collect();
    items.sort_by_key(|(m, _)| (m.count_ones(), **m));
    let mut out = String::new();
    for (i, (m, c)) in items.into_iter().enumerate() {
        let mut coeff = *c;
        let negative_real = fmt_real(coeff.im) == "0" && coeff.re < 0.0;
        if i > 0 {
            out.push_str(if negative_real { " - " } else { " + " });
            if negative_real {
                coeff = -coeff;
            }
        }
        out.push_str(&fmt_complex(coeff));
        if *m != 0 {
            out.push('*');
            let names: Vec<String> = bits(*m).map(&name).collect();
            let _ = write!(out, "{}", names.join("^"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pool(n: usize) -> (GeneratorPool, Vec<GenId>) {
        let mut p = GeneratorPool::new();
        let gs = (1..=n).map(|k| p.alloc(format!("θ{k}")).unwrap()).collect();
        (p, gs)
    }

    #[test]
    fn nilpotent_and_anticommuting() {
        let (p, g) = pool(2);
        let t1 = p.gen(g[0]);
        let t2 = p.gen(g[1]);
        assert!((&t1 * &t1).is_zero());
        let a = &t1 * &t2;
        let b = &t2 * &t1;
        assert_eq!(a.coeff(0b11), c(1.0));
        assert_eq!(b.coeff(0b11), c(-1.0));
    }

    #[test]
    fn distributivity() {
        let (p, g) = pool(2);
        let x = (p.one() + p.gen(g[0])) * (p.one() + p.gen(g[1]));
        assert_eq!(x.len(), 4);
        for m in 0..4u128 {
            assert_eq!(x.coeff(m), c(1.0));
        }
    }

    #[test]
    fn split_into_parities() {
        let (p, g) = pool(2);
        let (e, o) = (p.one() + p.gen(g[0])).parity_split();
        assert_eq!(e, p.one());
        assert_eq!(o, p.gen(g[0]));
        let t12 = p.gen(g[0]) * p.gen(g[1]);
        let (e, o) = t12.parity_split();
        assert_eq!(e, t12);
        assert!(o.is_zero());
    }

    #[test]
    fn involution_reverses_order() {
        let mut p = GeneratorPool::new();
        let (t1, t1s) = p.alloc_pair("θ1", "θ1*").unwrap();
        let (t2, t2s) = p.alloc_pair("θ2", "θ2*").unwrap();
        let x = p.gen(t1).scale(Complex64::new(2.0, 3.0));
        let y = p.involution(&x).unwrap();
        assert_eq!(y, p.gen(t1s).scale(Complex64::new(2.0, -3.0)));
        let x = p.product(&[t1, t2]);
        let want = p.product(&[t2s, t1s]);
        assert_eq!(p.involution(&x).unwrap(), want);
        assert_eq!(want, -p.product(&[t1s, t2s]));
    }

    #[test]
    fn involution_needs_pairs() {
        let (p, g) = pool(1);
        assert!(matches!(
            p.involution(&p.gen(g[0])),
            Err(Error::UnpairedGenerator(_))
        ));
    }

    #[test]
    fn derivatives() {
        let (p, g) = pool(2);
        let t12 = p.gen(g[0]) * p.gen(g[1]);
        assert_eq!(t12.left_derivative(g[0]), p.gen(g[1]));
        assert_eq!(t12.left_derivative(g[1]), -p.gen(g[0]));
        assert!(p.one().left_derivative(g[0]).is_zero());
    }

    #[test]
    fn berezin_conventions() {
        let mut p = GeneratorPool::new();
        let (gm, gms) = p.alloc_pair("γ", "γ*").unwrap();
        assert_eq!(p.gen(gm).berezin(&[gm]), p.one());
        assert!(p.one().berezin(&[gm]).is_zero());
        let gauss = (-(p.gen(gms) * p.gen(gm))).exp();
        assert_eq!(gauss.berezin(&[gms, gm]), p.one());
        let (a, _) = p.alloc_pair("α", "α*").unwrap();
        let (b, _) = p.alloc_pair("β", "β*").unwrap();
        let free = p.gen(a) + p.gen(b);
        assert!(free.berezin(&[gms, gm]).is_zero());
    }

    #[test]
    fn exp_of_nilpotents() {
        let (p, g) = pool(2);
        let t12 = p.gen(g[0]) * p.gen(g[1]);
        assert_eq!(t12.exp(), p.one() + &t12);
        assert_eq!(p.gen(g[0]).exp(), p.one() + p.gen(g[0]));
        let s = p.scalar(c(2.0)) + p.gen(g[0]);
        let e = s.exp();
        assert!((e.coeff(0) - c(2f64.exp())).norm() < 1e-12);
        assert!((e.coeff(1) - c(2f64.exp())).norm() < 1e-12);
    }

    #[test]
    fn exp_series_uses_factorials() {
        let (p, g) = pool(4);
        let x = p.gen(g[0]) * p.gen(g[1]) + p.gen(g[2]) * p.gen(g[3]);
        // exp(a + b) with commuting square-zero a, b = 1 + a + b + ab
        let want = p.one() + &x + p.gen(g[0]) * p.gen(g[1]) * p.gen(g[2]) * p.gen(g[3]);
        assert!(x.exp().approx_eq(&want, 1e-14));
    }

    #[test]
    fn ln_inverts_exp() {
        let (p, g) = pool(4);
        let x = p.scalar(Complex64::new(0.3, -0.2))
            + p.gen(g[0]) * p.gen(g[1]).scale(c(1.5))
            + p.gen(g[2])
            + p.gen(g[0]) * p.gen(g[3]);
        let y = x.exp().ln().unwrap();
        assert!(y.approx_eq(&x, 1e-12));
        assert!(matches!(p.gen(g[0]).ln(), Err(Error::NoLogarithm)));
    }

    #[test]
    fn pool_mismatch_is_an_error() {
        let (p, g) = pool(1);
        let (q, h) = pool(1);
        assert!(matches!(
            p.gen(g[0]).checked_mul(&q.gen(h[0])),
            Err(Error::PoolMismatch)
        ));
    }

    #[test]
    fn render_format() {
        let (p, g) = pool(2);
        let x = p.one() + p.gen(g[1]).scale(c(-2.0)) + p.gen(g[0]).scale(Complex64::new(0.5, 0.25))
            + (p.gen(g[0]) * p.gen(g[1])).scale(Complex64::new(0.0, 1.0));
        assert_eq!(p.render(&x), "1 + (0.5+0.25i)*θ1 - 2*θ2 + 1i*θ1^θ2");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(1e-14), "1e-14");
        assert_eq!(fmt_real(-12.5), "-12.5");
    }
}
