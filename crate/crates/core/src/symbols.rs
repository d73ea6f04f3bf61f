//! Coherent states and Grassmann symbols of states and operators.
//!
//! Grassmann coefficients sit to the right of kets and to the left of bras.
//! With that placement the coherent ket of `N` cells is
//! `|α> = Σ_n |n> α_{k1} α_{k2} ... α_{km}` (occupied cells ascending) and
//! its conjugate bra is `<α*| = Σ_n α*_{km} ... α*_{k1} <n|`. These are the
//! common eigenvectors `a_k^- |α> = |α> α_k`, and `<α*|β> = exp(α*·β)`.
//!
//! Every symbol owns a small pool with the standard layout
//! `α1*..αM*, β1..βN, α1..αM, β1*..βN*` (outputs, inputs, then their
//! conjugates). Operations import symbols into a scratch pool, allocate the
//! intermediate variables they integrate out, and export the result back to
//! the standard layout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockVector, C64};
use crate::grassmann::{GenId, GeneratorPool, Grassmann, Mask};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    /// `<α*|A|β>`
    Matrix,
    /// `<α*|A|β> / <α*|β>`
    Covariant,
    /// `<α*|f>`, an element of the α*-subalgebra
    State,
}

/// Generator slots of a symbol inside some pool.
#[derive(Debug, Clone)]
pub struct Slots {
    pub out: Vec<GenId>,
    pub inp: Vec<GenId>,
    pub out_conj: Vec<GenId>,
    pub inp_conj: Vec<GenId>,
}

impl Slots {
    /// Allocates `α1*..αM*, β1..βN` then their conjugates, with the given
    /// name stems.
    pub fn alloc(
        pool: &mut GeneratorPool,
        n_out: usize,
        n_in: usize,
        out_stem: &str,
        in_stem: &str,
    ) -> Result<Slots> {
        let out: Vec<GenId> = (1..=n_out)
            .map(|k| pool.alloc(format!("{out_stem}{k}*")))
            .collect::<Result<_>>()?;
        let inp: Vec<GenId> = (1..=n_in)
            .map(|k| pool.alloc(format!("{in_stem}{k}")))
            .collect::<Result<_>>()?;
        let mut out_conj = Vec::with_capacity(n_out);
        for (k, &g) in out.iter().enumerate() {
            let c = pool.alloc(format!("{out_stem}{}", k + 1))?;
            pool.pair(g, c);
            out_conj.push(c);
        }
        let mut inp_conj = Vec::with_capacity(n_in);
        for (k, &g) in inp.iter().enumerate() {
            let c = pool.alloc(format!("{in_stem}{}*", k + 1))?;
            pool.pair(g, c);
            inp_conj.push(c);
        }
        Ok(Slots {
            out,
            inp,
            out_conj,
            inp_conj,
        })
    }
}

/// A Grassmann symbol together with its arity and standard pool.
#[derive(Debug, Clone)]
pub struct SymbolExpr {
    pub kind: SymbolKind,
    pub n_out: usize,
    pub n_in: usize,
    pool: GeneratorPool,
    slots: Slots,
    pub value: Grassmann,
}

impl SymbolExpr {
    /// Empty-valued symbol in a fresh standard pool.
    pub fn blank(kind: SymbolKind, n_out: usize, n_in: usize) -> SymbolExpr {
        let mut pool = GeneratorPool::new();
        let slots = Slots::alloc(&mut pool, n_out, n_in, "α", "β").expect("small pool");
        let value = pool.zero();
        SymbolExpr {
            kind,
            n_out,
            n_in,
            pool,
            slots,
            value,
        }
    }

    pub fn pool(&self) -> &GeneratorPool {
        &self.pool
    }

    pub fn slots(&self) -> &Slots {
        &self.slots
    }

    pub fn out_gen(&self, k: usize) -> GenId {
        self.slots.out[k]
    }

    pub fn in_gen(&self, k: usize) -> GenId {
        self.slots.inp[k]
    }

    /// Replaces the value with one built over this symbol's pool.
    pub fn with_value(mut self, build: impl FnOnce(&GeneratorPool, &Slots) -> Grassmann) -> Self {
        self.value = build(&self.pool, &self.slots);
        self
    }

    /// Copies the value into `pool`, sending outputs to `out` and inputs to `inp`.
    pub fn import(&self, pool: &GeneratorPool, out: &[GenId], inp: &[GenId]) -> Grassmann {
        assert_eq!(out.len(), self.n_out);
        assert_eq!(inp.len(), self.n_in);
        let mut map = vec![GenId(u32::MAX); self.pool.len()];
        for (k, g) in self.slots.out.iter().enumerate() {
            map[g.index()] = out[k];
        }
        for (k, g) in self.slots.inp.iter().enumerate() {
            map[g.index()] = inp[k];
        }
        self.value.transplant(pool.id(), |g| {
            let h = map[g.index()];
            assert!(h.0 != u32::MAX, "symbol uses a conjugate slot");
            h
        })
    }

    /// Builds a symbol from a value living in a scratch pool.
    pub fn export(
        kind: SymbolKind,
        value: &Grassmann,
        from: &GeneratorPool,
        out: &[GenId],
        inp: &[GenId],
    ) -> SymbolExpr {
        let blank = SymbolExpr::blank(kind, out.len(), inp.len());
        let mut map = vec![GenId(u32::MAX); from.len()];
        for (k, g) in out.iter().enumerate() {
            map[g.index()] = blank.slots.out[k];
        }
        for (k, g) in inp.iter().enumerate() {
            map[g.index()] = blank.slots.inp[k];
        }
        let v = value.transplant(blank.pool.id(), |g| {
            let h = map[g.index()];
            assert!(h.0 != u32::MAX, "exported value still holds {}", from.name(g));
            h
        });
        SymbolExpr { value: v, ..blank }
    }

    pub fn render(&self) -> String {
        self.pool.render(&self.value)
    }

    /// Coefficient-wise deviation; infinite when the shapes differ.
    pub fn max_deviation(&self, other: &SymbolExpr) -> f64 {
        if (self.kind, self.n_out, self.n_in) != (other.kind, other.n_out, other.n_in) {
            return f64::INFINITY;
        }
        self.value.max_deviation(&other.value)
    }

    /// The same operator as a matrix symbol.
    pub fn to_matrix_symbol(&self) -> SymbolExpr {
        match self.kind {
            SymbolKind::Covariant => {
                let ov = overlap_in(&self.pool, &self.slots.out, &self.slots.inp)
                    .expect("square covariant symbol");
                SymbolExpr {
                    kind: SymbolKind::Matrix,
                    value: &self.value * &ov,
                    ..self.clone()
                }
            }
            _ => self.clone(),
        }
    }

    /// The same square operator as a covariant symbol.
    pub fn to_covariant_symbol(&self) -> Result<SymbolExpr> {
        match self.kind {
            SymbolKind::Covariant => Ok(self.clone()),
            SymbolKind::State => Err(Error::SymbolKind("state symbol is not an operator".into())),
            SymbolKind::Matrix => {
                if self.n_in != self.n_out {
                    return Err(Error::NotSquare {
                        n_in: self.n_in,
                        n_out: self.n_out,
                    });
                }
                let g = gauss(&self.pool, &self.slots.out, &self.slots.inp, -1.0);
                Ok(SymbolExpr {
                    kind: SymbolKind::Covariant,
                    value: &self.value * &g,
                    ..self.clone()
                })
            }
        }
    }

    /// Decodes the operator this symbol stands for.
    pub fn to_operator(&self) -> Result<FockOperator> {
        if self.kind == SymbolKind::State {
            return Err(Error::SymbolKind("state symbol is not an operator".into()));
        }
        let ms = self.to_matrix_symbol();
        let mut op = FockOperator::zeros(self.n_in, self.n_out);
        for n in 0..(1 << self.n_out) {
            let (bm, bs) = bra_monomial(n, &self.slots.out);
            for m in 0..(1 << self.n_in) {
                let (km, ks) = ket_monomial(m, &self.slots.inp);
                let sign = crate::grassmann::merge_sign(bm, km).expect("disjoint slots");
                op.entries[(n, m)] = ms.value.coeff(bm | km) * (bs * ks * sign);
            }
        }
        Ok(op)
    }

    /// Decodes the state vector of a state symbol.
    pub fn to_state(&self) -> Result<FockVector> {
        if self.kind != SymbolKind::State {
            return Err(Error::SymbolKind("expected a state symbol".into()));
        }
        let amps = (0..(1 << self.n_out))
            .map(|n| {
                let (m, s) = bra_monomial(n, &self.slots.out);
                self.value.coeff(m) * s
            })
            .collect();
        Ok(FockVector::from_amplitudes(self.n_out, amps))
    }
}

/// Mask and sign of the ordered product of `gens`.
pub(crate) fn ordered_product(gens: impl IntoIterator<Item = GenId>) -> (Mask, f64) {
    let mut mask: Mask = 0;
    let mut sign = 1.0;
    for g in gens {
        debug_assert!(mask & g.bit() == 0);
        if (mask >> (g.0 + 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask |= g.bit();
    }
    (mask, sign)
}

/// Coefficient of `<n|` in the coherent bra: `α*_{km} ... α*_{k1}`.
pub fn bra_monomial(n: usize, out: &[GenId]) -> (Mask, f64) {
    ordered_product(
        (0..out.len())
            .rev()
            .filter(|&k| n >> k & 1 == 1)
            .map(|k| out[k]),
    )
}

/// Coefficient of `|m>` in the coherent ket: `β_{k1} ... β_{km}`.
pub fn ket_monomial(m: usize, inp: &[GenId]) -> (Mask, f64) {
    ordered_product((0..inp.len()).filter(|&k| m >> k & 1 == 1).map(|k| inp[k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Ket,
    Bra,
}

/// Fock-space vector with Grassmann amplitudes.
#[derive(Debug, Clone)]
pub struct CoherentVector {
    pub side: Side,
    pub n_cells: usize,
    pub entries: Vec<Grassmann>,
}

impl CoherentVector {
    /// `A |v>` for a ket; matrices act on the basis index only.
    pub fn apply(&self, op: &FockOperator) -> Result<CoherentVector> {
        if self.side != Side::Ket || op.n_in != self.n_cells {
            return Err(Error::Arity("operator does not act on this ket".into()));
        }
        let pool = self.entries[0].pool();
        let mut entries = vec![Grassmann::zero(pool); op.dim_out()];
        for (n, e) in entries.iter_mut().enumerate() {
            for (m, x) in self.entries.iter().enumerate() {
                let a = op.entries[(n, m)];
                if a.norm() > 0.0 {
                    *e += &x.scale(a);
                }
            }
        }
        Ok(CoherentVector {
            side: Side::Ket,
            n_cells: op.n_out,
            entries,
        })
    }

    /// Multiplies every amplitude by `g` on the right.
    pub fn times_right(&self, g: &Grassmann) -> CoherentVector {
        CoherentVector {
            entries: self.entries.iter().map(|x| x * g).collect(),
            ..self.clone()
        }
    }

    /// Multiplies every amplitude by `g` on the left.
    pub fn times_left(&self, g: &Grassmann) -> CoherentVector {
        CoherentVector {
            entries: self.entries.iter().map(|x| g * x).collect(),
            ..self.clone()
        }
    }

    pub fn max_deviation(&self, other: &CoherentVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |a, (x, y)| a.max(x.max_deviation(y)))
    }
}

/// `|α> = exp(α·a^+)|0>` over the given generators, one per cell.
pub fn coherent_ket(pool: &GeneratorPool, gens: &[GenId]) -> CoherentVector {
    let entries = (0..(1usize << gens.len()))
        .map(|m| {
            let (mask, s) = ket_monomial(m, gens);
            Grassmann::monomial(pool.id(), mask, C64::new(s, 0.0))
        })
        .collect();
    CoherentVector {
        side: Side::Ket,
        n_cells: gens.len(),
        entries,
    }
}

/// `<α*| = <0| exp(a^-·α*)`.
pub fn coherent_bra(pool: &GeneratorPool, gens: &[GenId]) -> CoherentVector {
    let entries = (0..(1usize << gens.len()))
        .map(|n| {
            let (mask, s) = bra_monomial(n, gens);
            Grassmann::monomial(pool.id(), mask, C64::new(s, 0.0))
        })
        .collect();
    CoherentVector {
        side: Side::Bra,
        n_cells: gens.len(),
        entries,
    }
}

fn overlap_in(pool: &GeneratorPool, bra: &[GenId], ket: &[GenId]) -> Result<Grassmann> {
    if bra.len() != ket.len() {
        return Err(Error::Arity(format!(
            "overlap of {} and {} cells",
            bra.len(),
            ket.len()
        )));
    }
    let mut x = pool.zero();
    for (a, b) in bra.iter().zip(ket) {
        x += &(pool.gen(*a) * pool.gen(*b));
    }
    Ok(x.exp())
}

/// `<α*|β> = exp(Σ_k α*_k β_k)`.
pub fn overlap(pool: &GeneratorPool, bra: &[GenId], ket: &[GenId]) -> Result<Grassmann> {
    overlap_in(pool, bra, ket)
}

/// `exp(Σ_k coeff · left_k right_k)`, each term a commuting bilinear.
fn gauss(pool: &GeneratorPool, left: &[GenId], right: &[GenId], coeff: f64) -> Grassmann {
    let mut x = pool.one();
    for (a, b) in left.iter().zip(right) {
        x = x * (pool.one() + (pool.gen(*a) * pool.gen(*b)).scale_re(coeff));
    }
    x
}

/// `<α*|A|β>`.
pub fn matrix_symbol(op: &FockOperator) -> SymbolExpr {
    SymbolExpr::blank(SymbolKind::Matrix, op.n_out, op.n_in).with_value(|pool, slots| {
        let mut terms = Vec::new();
        for n in 0..op.dim_out() {
            let (bm, bs) = bra_monomial(n, &slots.out);
            for m in 0..op.dim_in() {
                let a = op.entries[(n, m)];
                if a.norm() == 0.0 {
                    continue;
                }
                let (km, ks) = ket_monomial(m, &slots.inp);
                let sign = crate::grassmann::merge_sign(bm, km).expect("disjoint slots");
                terms.push((bm | km, a * (bs * ks * sign)));
            }
        }
        Grassmann::from_terms(pool.id(), terms)
    })
}

/// `<α*|A|β> / <α*|β>`, defined for square operators only.
pub fn covariant_symbol(op: &FockOperator) -> Result<SymbolExpr> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            n_in: op.n_in,
            n_out: op.n_out,
        });
    }
    let ms = matrix_symbol(op);
    let inv = gauss(ms.pool(), &ms.slots.out, &ms.slots.inp, -1.0);
    let value = &ms.value * &inv;
    Ok(SymbolExpr {
        kind: SymbolKind::Covariant,
        value,
        ..ms
    })
}

/// `<α*|f>`.
pub fn state_symbol(v: &FockVector) -> SymbolExpr {
    SymbolExpr::blank(SymbolKind::State, v.n_cells, 0).with_value(|pool, slots| {
        Grassmann::from_terms(
            pool.id(),
            (0..(1usize << v.n_cells)).map(|n| {
                let (m, s) = bra_monomial(n, &slots.out);
                (m, v.amplitudes[n] * s)
            }),
        )
    })
}

/// Symbol of the identity operator on `n` cells (the covariant `1`).
pub fn identity_symbol(n: usize) -> SymbolExpr {
    SymbolExpr::blank(SymbolKind::Covariant, n, n).with_value(|pool, _| pool.one())
}

/// Scratch pool holding result slots plus one block of integration pairs.
struct Scratch {
    pool: GeneratorPool,
    slots: Slots,
    /// `(γ_k, γ*_k)`
    mid: Vec<(GenId, GenId)>,
}

impl Scratch {
    fn new(n_out: usize, n_in: usize, n_mid: usize) -> Result<Scratch> {
        let mut pool = GeneratorPool::new();
        let slots = Slots::alloc(&mut pool, n_out, n_in, "α", "β")?;
        let mid = (1..=n_mid)
            .map(|k| pool.alloc_pair(format!("γ{k}"), format!("γ{k}*")))
            .collect::<Result<_>>()?;
        Ok(Scratch { pool, slots, mid })
    }

    fn gammas(&self) -> Vec<GenId> {
        self.mid.iter().map(|p| p.0).collect()
    }

    fn gamma_stars(&self) -> Vec<GenId> {
        self.mid.iter().map(|p| p.1).collect()
    }
}

/// Berezin integral over the pairs `dγ*_k dγ_k`, one cell at a time, each
/// cell first multiplied by its even kernel factor.
fn integrate_pairs(
    mut x: Grassmann,
    pairs: &[(GenId, GenId)],
    kernel: impl Fn(usize) -> Grassmann,
) -> Grassmann {
    for (k, &(g, gs)) in pairs.iter().enumerate() {
        x = (&x * &kernel(k)).berezin(&[gs, g]);
    }
    x
}

/// Convolution of covariant symbols: the covariant symbol of `A B`.
pub fn convolve(a: &SymbolExpr, b: &SymbolExpr) -> Result<SymbolExpr> {
    for s in [a, b] {
        if s.kind != SymbolKind::Covariant {
            return Err(Error::SymbolKind("convolution takes covariant symbols".into()));
        }
    }
    if a.n_in != b.n_out {
        return Err(Error::Arity(format!(
            "convolving {}-input symbol with {}-output symbol",
            a.n_in, b.n_out
        )));
    }
    let sc = Scratch::new(a.n_out, b.n_in, a.n_in)?;
    let p = &sc.pool;
    let (al, be) = (&sc.slots.out, &sc.slots.inp);
    let (ga, gs) = (sc.gammas(), sc.gamma_stars());
    let x = a.import(p, al, &ga) * b.import(p, &gs, be);
    let x = integrate_pairs(x, &sc.mid, |k| {
        let (g, g_star) = sc.mid[k];
        // α*γ + γ*β - γ*γ for this cell
        let mut e = (p.gen(g_star) * p.gen(g)).scale_re(-1.0);
        if k < al.len() {
            e += &(p.gen(al[k]) * p.gen(g));
        }
        if k < be.len() {
            e += &(p.gen(g_star) * p.gen(be[k]));
        }
        e.exp()
    });
    // divide by <α*|β>
    let x = x * gauss(p, al, be, -1.0);
    Ok(SymbolExpr::export(SymbolKind::Covariant, &x, p, al, be))
}

/// Matrix symbol of `A B` from matrix symbols, inserting the resolution of
/// the identity between the factors.
pub fn compose_matrix_symbols(a: &SymbolExpr, b: &SymbolExpr) -> Result<SymbolExpr> {
    if a.n_in != b.n_out {
        return Err(Error::Arity(format!(
            "composing {}-input symbol with {}-output symbol",
            a.n_in, b.n_out
        )));
    }
    let (a, b) = (a.to_matrix_symbol(), b.to_matrix_symbol());
    let sc = Scratch::new(a.n_out, b.n_in, a.n_in)?;
    let p = &sc.pool;
    let (al, be) = (&sc.slots.out, &sc.slots.inp);
    let x = a.import(p, al, &sc.gammas()) * b.import(p, &sc.gamma_stars(), be);
    let x = integrate_pairs(x, &sc.mid, |k| {
        let (g, g_star) = sc.mid[k];
        (-(p.gen(g_star) * p.gen(g))).exp()
    });
    Ok(SymbolExpr::export(SymbolKind::Matrix, &x, p, al, be))
}

/// Symbol of the state `A f`.
pub fn apply_symbol(a: &SymbolExpr, f: &SymbolExpr) -> Result<SymbolExpr> {
    if f.kind != SymbolKind::State || a.kind == SymbolKind::State {
        return Err(Error::SymbolKind("apply_symbol takes an operator and a state".into()));
    }
    if a.n_in != f.n_out {
        return Err(Error::Arity(format!(
            "{}-input operator applied to {}-cell state",
            a.n_in, f.n_out
        )));
    }
    let sc = Scratch::new(a.n_out, 0, a.n_in)?;
    let p = &sc.pool;
    let al = &sc.slots.out;
    let covariant = a.kind == SymbolKind::Covariant;
    let x = a.import(p, al, &sc.gammas()) * f.import(p, &sc.gamma_stars(), &[]);
    let x = integrate_pairs(x, &sc.mid, |k| {
        let (g, g_star) = sc.mid[k];
        let mut e = -(p.gen(g_star) * p.gen(g));
        if covariant {
            e += &(p.gen(al[k]) * p.gen(g));
        }
        e.exp()
    });
    Ok(SymbolExpr::export(SymbolKind::State, &x, p, al, &[]))
}

/// Hermitian product `<f, g> = ∫ f(α*)^* g(α*) exp(-α*·α) dα* dα`.
pub fn scalar_product(f: &SymbolExpr, g: &SymbolExpr) -> Result<Complex64> {
    if f.kind != SymbolKind::State || g.kind != SymbolKind::State {
        return Err(Error::SymbolKind("scalar product of state symbols".into()));
    }
    if f.n_out != g.n_out {
        return Err(Error::Arity("states over different cell counts".into()));
    }
    let n = f.n_out;
    let mut p = GeneratorPool::new();
    let pairs: Vec<(GenId, GenId)> = (1..=n)
        .map(|k| p.alloc_pair(format!("α{k}"), format!("α{k}*")))
        .collect::<Result<_>>()?;
    let stars: Vec<GenId> = pairs.iter().map(|x| x.1).collect();
    let fbar = p.involution(&f.import(&p, &stars, &[]))?;
    let x = fbar * g.import(&p, &stars, &[]);
    let x = integrate_pairs(x, &pairs, |k| {
        let (a, a_star) = pairs[k];
        (-(p.gen(a_star) * p.gen(a))).exp()
    });
    debug_assert!(x.support() == 0);
    Ok(x.scalar_part())
}

/// Assembles `∫ |α><α*| exp(-α*·α) dα* dα` entry by entry.
pub fn resolution_of_identity(n: usize) -> Result<FockOperator> {
    let mut p = GeneratorPool::new();
    let pairs: Vec<(GenId, GenId)> = (1..=n)
        .map(|k| p.alloc_pair(format!("α{k}"), format!("α{k}*")))
        .collect::<Result<_>>()?;
    let al: Vec<GenId> = pairs.iter().map(|x| x.0).collect();
    let st: Vec<GenId> = pairs.iter().map(|x| x.1).collect();
    let ket = coherent_ket(&p, &al);
    let bra = coherent_bra(&p, &st);
    let mut op = FockOperator::zeros(n, n);
    for r in 0..(1 << n) {
        for c in 0..(1 << n) {
            let x = &ket.entries[r] * &bra.entries[c];
            let v = integrate_pairs(x, &pairs, |k| {
                let (a, a_star) = pairs[k];
                (-(p.gen(a_star) * p.gen(a))).exp()
            });
            op.entries[(r, c)] = v.scalar_part();
        }
    }
    Ok(op)
}

/// Matrix symbol of `A - 1`, plus the scalar `1`: the exponent-ready form in
/// which only the nontrivial part of a gate carries the coherent-state
/// matrix elements.
pub fn shifted_matrix_symbol(op: &FockOperator) -> Result<SymbolExpr> {
    if !op.is_square() {
        return Err(Error::NotSquare {
            n_in: op.n_in,
            n_out: op.n_out,
        });
    }
    let ms = matrix_symbol(&op.sub(&FockOperator::identity(op.n_in)));
    let value = ms.pool().one() + &ms.value;
    Ok(SymbolExpr { value, ..ms })
}

/// Basis state `|n>` as a vector.
pub fn basis_state(n: usize, cells: usize) -> FockVector {
    FockVector::basis(crate::fock::BasisIndex::new(n, cells))
}
