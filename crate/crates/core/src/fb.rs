//! Fock-Bargmann representation: operators as differential operators on state
//! symbols.
//!
//! On a state symbol `f(α*)`, `a_k^+` acts by left multiplication with `α_k*`
//! and `a_k^-` by the left derivative `∂/∂α_k*`. A square operator is stored
//! in normal order, as a sum of `c · a^+_C a^-_D` with both index lists
//! ascending. A rectangular operator has no such form on a single set of
//! cells; it is stored as a sum of projected matrix units
//! `c · α*_C · π_0 · ∂_D`, where `π_0` discards every monomial still holding
//! an input variable.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{string_sign, FockOperator, C64};
use crate::grassmann::{fmt_complex, GenId, GeneratorPool, Grassmann, Mask};
use crate::symbols::{SymbolExpr, SymbolKind};

const TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbForm {
    Normal,
    Projected,
}

/// `coeff · α*_{create} · ∂_{annihilate}`; bit `k-1` of a mask is cell `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FbTerm {
    pub create: u64,
    pub annihilate: u64,
    pub coeff: C64,
}

impl FbTerm {
    pub fn is_odd(&self) -> bool {
        (self.create.count_ones() + self.annihilate.count_ones()) % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FbOperator {
    pub n_in: usize,
    pub n_out: usize,
    pub form: FbForm,
    pub terms: Vec<FbTerm>,
}

fn cells(mask: u64) -> impl DoubleEndedIterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// `a^+_C a^-_D |m>` with ascending index lists, as `(state, sign)`.
fn ladder(create: u64, annihilate: u64, m: usize) -> Option<(usize, f64)> {
    let mut bits = m;
    let mut sign = 1.0;
    for i in cells(annihilate).rev() {
        if bits >> i & 1 == 0 {
            return None;
        }
        bits &= !(1 << i);
        sign *= string_sign(bits, i + 1);
    }
    for i in cells(create).rev() {
        if bits >> i & 1 == 1 {
            return None;
        }
        sign *= string_sign(bits, i + 1);
        bits |= 1 << i;
    }
    Some((bits, sign))
}

/// Sign turning the descending product of `p` generators into the ascending one.
fn reversal_sign(p: u32) -> f64 {
    if (p * p.saturating_sub(1) / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Decomposes `A` into Fock-Bargmann form.
///
/// Square operators are solved column by column in order of increasing
/// occupation: the monomial `a^+_n a^-_m` is the only one with annihilation
/// set `m` that reaches `<n|·|m>`, and it touches no column of lower or equal
/// occupation other than `m`.
pub fn to_fb_operator(a: &FockOperator) -> FbOperator {
    if a.is_square() {
        normal_form(a)
    } else {
        projected_form(a)
    }
}

fn normal_form(a: &FockOperator) -> FbOperator {
    let n = a.n_in;
    let dim = 1usize << n;
    let mut residual = a.entries.clone();
    let mut columns: Vec<usize> = (0..dim).collect();
    columns.sort_by_key(|m| (m.count_ones(), *m));
    let mut terms = Vec::new();
    for &m in &columns {
        for row in 0..dim {
            let r = residual[(row, m)];
            if r.norm() <= TOL {
                continue;
            }
            let (create, annihilate) = (row as u64, m as u64);
            let (_, s) = ladder(create, annihilate, m).expect("a^+_n a^-_m reaches n from m");
            let coeff = r * s;
            for col in 0..dim {
                if let Some((to, sign)) = ladder(create, annihilate, col) {
                    residual[(to, col)] -= coeff * sign;
                }
            }
            terms.push(FbTerm {
                create,
                annihilate,
                coeff,
            });
        }
    }
    sort_terms(&mut terms);
    FbOperator {
        n_in: n,
        n_out: n,
        form: FbForm::Normal,
        terms,
    }
}

fn projected_form(a: &FockOperator) -> FbOperator {
    let mut terms = Vec::new();
    for row in 0..a.dim_out() {
        for col in 0..a.dim_in() {
            let c = a.entries[(row, col)];
            if c.norm() <= TOL {
                continue;
            }
            terms.push(FbTerm {
                create: row as u64,
                annihilate: col as u64,
                coeff: c * reversal_sign(row.count_ones()),
            });
        }
    }
    sort_terms(&mut terms);
    FbOperator {
        n_in: a.n_in,
        n_out: a.n_out,
        form: FbForm::Projected,
        terms,
    }
}

fn sort_terms(terms: &mut [FbTerm]) {
    terms.sort_by_key(|t| {
        (
            t.create.count_ones() + t.annihilate.count_ones(),
            t.annihilate,
            t.create,
        )
    });
}

impl FbOperator {
    /// Applies the operator to the variables `inp` of `x`, a value over `pool`.
    ///
    /// Variables in `high` stand for cells placed after the operator's cells;
    /// odd terms flip their sign so that the result matches a plain tensor
    /// embedding. Normal-form operators act in place and return `inp` as the
    /// output variables; projected operators write into `out`.
    pub fn act(
        &self,
        pool: &GeneratorPool,
        x: &Grassmann,
        inp: &[GenId],
        out: &[GenId],
        high: Mask,
    ) -> Grassmann {
        assert_eq!(inp.len(), self.n_in);
        let targets = match self.form {
            FbForm::Normal => inp,
            FbForm::Projected => out,
        };
        assert_eq!(targets.len(), self.n_out);
        let in_mask = inp.iter().fold(0, |m, g| m | g.bit());
        let mut acc = pool.zero();
        for t in &self.terms {
            let mut y = if t.is_odd() {
                x.flip_sign(high)
            } else {
                x.clone()
            };
            for i in cells(t.annihilate).rev() {
                y = y.left_derivative(inp[i]);
            }
            if self.form == FbForm::Projected {
                y = y.drop_containing(in_mask);
            }
            let gens: Vec<GenId> = cells(t.create).map(|i| targets[i]).collect();
            acc += &(&pool.product(&gens) * &y).scale(t.coeff);
        }
        acc
    }

    /// `fb_apply`: the operator acting on a state symbol.
    pub fn apply(&self, f: &SymbolExpr) -> Result<SymbolExpr> {
        if f.kind != SymbolKind::State {
            return Err(Error::SymbolKind("FB operators act on state symbols".into()));
        }
        if f.n_out != self.n_in {
            return Err(Error::Arity(format!(
                "operator on {} cells applied to a {}-cell state",
                self.n_in, f.n_out
            )));
        }
        let inp = f.slots().out.clone();
        match self.form {
            FbForm::Normal => {
                let v = self.act(f.pool(), &f.value, &inp, &[], 0);
                Ok(SymbolExpr::export(SymbolKind::State, &v, f.pool(), &inp, &[]))
            }
            FbForm::Projected => {
                let mut pool = f.pool().clone();
                let out = (1..=self.n_out)
                    .map(|k| pool.alloc(format!("y{k}*")))
                    .collect::<Result<Vec<_>>>()?;
                let x = f.value.transplant(pool.id(), |g| g);
                let v = self.act(&pool, &x, &inp, &out, 0);
                Ok(SymbolExpr::export(SymbolKind::State, &v, &pool, &out, &[]))
            }
        }
    }

    /// Normal-ordered form as a Grassmann element, `∂_k` written as `d[k]`.
    pub fn as_grassmann(&self, pool: &GeneratorPool, create: &[GenId], d: &[GenId]) -> Grassmann {
        let mut acc = pool.zero();
        for t in &self.terms {
            let gens: Vec<GenId> = cells(t.create)
                .map(|i| create[i])
                .chain(cells(t.annihilate).map(|i| d[i]))
                .collect();
            acc += &pool.product(&gens).scale(t.coeff);
        }
        acc
    }

    /// Reads a normal-ordered Grassmann form back into terms.
    pub fn from_grassmann(n: usize, x: &Grassmann, create: &[GenId], d: &[GenId]) -> FbOperator {
        let mut terms = Vec::new();
        for (&mask, &c) in x.terms() {
            let mut cm = 0u64;
            let mut dm = 0u64;
            for k in 0..n {
                if mask & create[k].bit() != 0 {
                    cm |= 1 << k;
                }
                if mask & d[k].bit() != 0 {
                    dm |= 1 << k;
                }
            }
            terms.push(FbTerm {
                create: cm,
                annihilate: dm,
                coeff: c,
            });
        }
        sort_terms(&mut terms);
        FbOperator {
            n_in: n,
            n_out: n,
            form: FbForm::Normal,
            terms,
        }
    }

    /// Largest coefficient difference, matching terms by their masks.
    pub fn max_deviation(&self, other: &FbOperator) -> f64 {
        if (self.n_in, self.n_out, self.form) != (other.n_in, other.n_out, other.form) {
            return f64::INFINITY;
        }
        let key = |t: &FbTerm| (t.create, t.annihilate);
        let mut worst: f64 = 0.0;
        for t in &self.terms {
            let o = other
                .terms
                .iter()
                .find(|u| key(u) == key(t))
                .map_or(Complex64::new(0.0, 0.0), |u| u.coeff);
            worst = worst.max((t.coeff - o).norm());
        }
        for u in &other.terms {
            if !self.terms.iter().any(|t| key(t) == key(u)) {
                worst = worst.max(u.coeff.norm());
            }
        }
        worst
    }
}

impl fmt::Display for FbOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let (out, inp) = match self.form {
            FbForm::Normal => ("α", "α"),
            FbForm::Projected => ("α", "β"),
        };
        for (i, t) in self.terms.iter().enumerate() {
            let mut factors: Vec<String> = cells(t.create).map(|k| format!("{out}{}*", k + 1)).collect();
            if self.form == FbForm::Projected {
                factors.push("π0".into());
            }
            factors.extend(cells(t.annihilate).map(|k| format!("∂/∂{inp}{}*", k + 1)));
            let c = fmt_complex(t.coeff);
            let body = if factors.is_empty() {
                c
            } else {
                format!("{c}*{}", factors.join("·"))
            };
            match (i, body.strip_prefix('-')) {
                (0, _) => write!(f, "{body}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        and_matrix, annihilation, cc_not_matrix, creation, deutsch_matrix, not_matrix, or_matrix,
        FockVector,
    };
    use crate::symbols::{basis_state, state_symbol};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn rebuild(op: &FbOperator) -> FockOperator {
        let n = op.n_in;
        let mut acc = FockOperator::zeros(n, n);
        for t in &op.terms {
            let mut m = FockOperator::identity(n);
            for k in cells(t.create) {
                m = m.compose(&creation(k + 1, n).unwrap()).unwrap();
            }
            for k in cells(t.annihilate) {
                m = m.compose(&annihilation(k + 1, n).unwrap()).unwrap();
            }
            acc = acc.add(&m.scale(t.coeff));
        }
        acc
    }

    #[test]
    fn not_is_creation_plus_derivative() {
        let fb = to_fb_operator(&not_matrix());
        assert_eq!(fb.terms.len(), 2);
        assert_eq!(fb.to_string(), "1*α1* + 1*∂/∂α1*");
    }

    #[test]
    fn normal_form_rebuilds_the_matrix() {
        for a in [cc_not_matrix(), deutsch_matrix(0.4), not_matrix()] {
            let fb = to_fb_operator(&a);
            assert!(rebuild(&fb).max_deviation(&a) < 1e-12);
        }
    }

    #[test]
    fn faithful_on_basis_states() {
        for a in [
            not_matrix(),
            cc_not_matrix(),
            deutsch_matrix(1.1),
            and_matrix(),
            or_matrix(),
        ] {
            let fb = to_fb_operator(&a);
            for m in 0..a.dim_in() {
                let f = basis_state(m, a.n_in);
                let lhs = fb.apply(&state_symbol(&f)).unwrap();
                let rhs = state_symbol(&a.apply(&f).unwrap());
                assert!(lhs.max_deviation(&rhs) < 1e-12, "{a} on {m}");
            }
        }
    }

    #[test]
    fn not_on_vacuum_symbol() {
        let fb = to_fb_operator(&not_matrix());
        let one = state_symbol(&FockVector::from_amplitudes(1, vec![c(1.0), c(0.0)]));
        assert_eq!(fb.apply(&one).unwrap().render(), "1*α1*");
    }

    #[test]
    fn grassmann_form_round_trip() {
        let fb = to_fb_operator(&deutsch_matrix(0.3));
        let mut pool = GeneratorPool::new();
        let a: Vec<GenId> = (1..=3).map(|k| pool.alloc(format!("α{k}*")).unwrap()).collect();
        let d: Vec<GenId> = (1..=3).map(|k| pool.alloc(format!("d{k}")).unwrap()).collect();
        let g = fb.as_grassmann(&pool, &a, &d);
        let back = FbOperator::from_grassmann(3, &g, &a, &d);
        assert!(back.max_deviation(&fb) < 1e-15);
    }

    #[test]
    fn arity_is_checked() {
        let fb = to_fb_operator(&and_matrix());
        let f = state_symbol(&basis_state(0, 3));
        assert!(fb.apply(&f).is_err());
    }
}
