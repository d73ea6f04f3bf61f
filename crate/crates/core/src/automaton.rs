//! Unitary automata over qubit memory.
//!
//! A word `w = Δw_0 Δw_1 ... Δw_{n-1}` acts as `U(Δw_{n-1}) ... U(Δw_0)`: the
//! first letter acts first. Its covariant symbol is computed three ways:
//! by the matrix product, by folding convolutions of the letter symbols, and
//! as a discrete Grassmann path integral over a trajectory
//! `γ_0 = β, γ_1, ..., γ_{n-1}, γ_n* = α*` with action
//!
//! ```text
//! S = Σ_k [γ_{k+1}* γ_k - γ_k* γ_k] + Σ_k [H_k(γ_{k+1}*, γ_k) + O_k] - α*β
//! O_k = H_k^o Σ_{j<k} H_j^o
//! ```
//!
//! where `exp(H_k)` is the covariant symbol of letter `k` and the `γ_0* γ_0`
//! term is absent. `O_k` collects the cross terms of
//! `exp(x) exp(y) = exp(x + y + x^o y^o)` that appear when the ordered
//! product of letter exponentials is merged into one exponential.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockOperator;
use crate::gates::{make_gate, Gate};
use crate::grassmann::{fmt_real, GenId, GeneratorPool, Grassmann};
use crate::symbols::{covariant_symbol, convolve, SymbolExpr, SymbolKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Letter {
    pub gate: String,
    pub param: Option<f64>,
}

impl Letter {
    pub fn new(gate: impl Into<String>, param: Option<f64>) -> Self {
        Letter {
            gate: gate.into(),
            param,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}({p})", self.gate),
            None => write!(f, "{}", self.gate),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn deutsch(phis: &[f64]) -> Self {
        Word::new(phis.iter().map(|&p| Letter::new("deutsch", Some(p))).collect())
    }

    pub fn deutsch_prime(phis: &[f64]) -> Self {
        Word::new(phis.iter().map(|&p| Letter::new("deutsch_prime", Some(p))).collect())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter gates, checked to be square on one common cell count.
    pub fn gates(&self) -> Result<Vec<Gate>> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let gates = self
            .letters
            .iter()
            .map(|l| make_gate(&l.gate, l.param))
            .collect::<Result<Vec<_>>>()?;
        let n = gates[0].n_in;
        for g in &gates {
            if !g.is_square() || g.n_in != n {
                return Err(Error::Arity(format!(
                    "letter {} acts on {} -> {} cells, word needs {n} -> {n}",
                    g.label(),
                    g.n_in,
                    g.n_out
                )));
            }
        }
        Ok(gates)
    }

    /// Splits every `deutsch_prime(φ)` into `n` letters `deutsch_prime(φ/n)`;
    /// other letters are kept whole.
    pub fn refine(&self, n: usize) -> Word {
        let mut out = Vec::new();
        for l in &self.letters {
            match (l.gate.as_str(), l.param) {
                ("deutsch_prime", Some(p)) if n > 1 => {
                    out.extend((0..n).map(|_| Letter::new("deutsch_prime", Some(p / n as f64))))
                }
                _ => out.push(l.clone()),
            }
        }
        Word::new(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `U(Δw_{n-1}) ... U(Δw_0)`.
pub fn word_matrix(w: &Word) -> Result<FockOperator> {
    let gates = w.gates()?;
    let mut acc = gates[0].matrix.clone();
    for g in &gates[1..] {
        acc = g.matrix.compose(&acc)?;
    }
    Ok(acc)
}

/// Left fold of convolutions over the letter symbols.
pub fn word_symbol_convolution(w: &Word) -> Result<SymbolExpr> {
    let gates = w.gates()?;
    let mut acc = gates[0].symbol.clone();
    for g in &gates[1..] {
        acc = convolve(&g.symbol, &acc)?;
    }
    Ok(acc)
}

/// Exponential generators of the letters of `w`.
pub fn word_generators(w: &Word) -> Result<Vec<SymbolExpr>> {
    w.gates()?
        .iter()
        .map(|g| g.generator().cloned())
        .collect()
}

/// Path integral with the full action, or without the `O_k` terms.
pub fn word_symbol_path_integral(w: &Word, drop_odd_term: bool) -> Result<SymbolExpr> {
    Superaction::new(&word_generators(w)?)?.evaluate(drop_odd_term)
}

/// The discrete action on a trajectory, with its terms kept apart.
#[derive(Debug, Clone)]
pub struct Superaction {
    pub n_cells: usize,
    pool: GeneratorPool,
    alpha: Vec<GenId>,
    beta: Vec<GenId>,
    /// `γ_k`, `k = 1..n-1`, one vector of cells per slice.
    gamma: Vec<Vec<GenId>>,
    /// `γ_k*`, `k = 1..n-1`.
    gamma_star: Vec<Vec<GenId>>,
    /// `H_k(γ_{k+1}*, γ_k)`.
    pub hamiltonians: Vec<Grassmann>,
    /// `O_k`.
    pub odd_terms: Vec<Grassmann>,
}

impl Superaction {
    pub fn new(generators: &[SymbolExpr]) -> Result<Superaction> {
        let Some(first) = generators.first() else {
            return Err(Error::EmptyWord);
        };
        let n_cells = first.n_in;
        for h in generators {
            if h.kind != SymbolKind::Covariant || h.n_in != n_cells || h.n_out != n_cells {
                return Err(Error::Arity(
                    "path integral needs covariant generators on one cell count".into(),
                ));
            }
        }
        let n = generators.len();
        let mut pool = GeneratorPool::new();
        let alpha = (1..=n_cells)
            .map(|c| pool.alloc(format!("α{c}*")))
            .collect::<Result<Vec<_>>>()?;
        let beta = (1..=n_cells)
            .map(|c| pool.alloc(format!("β{c}")))
            .collect::<Result<Vec<_>>>()?;
        let mut gamma = Vec::new();
        let mut gamma_star = Vec::new();
        for k in 1..n {
            let mut g = Vec::new();
            let mut gs = Vec::new();
            for c in 1..=n_cells {
                let (a, b) = pool.alloc_pair(format!("γ{k}_{c}"), format!("γ{k}_{c}*"))?;
                g.push(a);
                gs.push(b);
            }
            gamma.push(g);
            gamma_star.push(gs);
        }
        let mut sa = Superaction {
            n_cells,
            pool,
            alpha,
            beta,
            gamma,
            gamma_star,
            hamiltonians: Vec::new(),
            odd_terms: Vec::new(),
        };
        let mut odd_sum = sa.pool.zero();
        for (k, h) in generators.iter().enumerate() {
            let hk = h.import(&sa.pool, &sa.star(k + 1), &sa.plain(k));
            let hk_odd = hk.odd_part();
            sa.odd_terms.push(&hk_odd * &odd_sum);
            odd_sum += &hk_odd;
            sa.hamiltonians.push(hk);
        }
        Ok(sa)
    }

    pub fn slices(&self) -> usize {
        self.gamma.len() + 1
    }

    /// `γ_k` with `γ_0 = β`.
    fn plain(&self, k: usize) -> Vec<GenId> {
        if k == 0 {
            self.beta.clone()
        } else {
            self.gamma[k - 1].clone()
        }
    }

    /// `γ_k*` with `γ_n* = α*`.
    fn star(&self, k: usize) -> Vec<GenId> {
        if k == self.slices() {
            self.alpha.clone()
        } else {
            self.gamma_star[k - 1].clone()
        }
    }

    /// `Σ_k (H_k + O_k)`, optionally without the `O_k`.
    pub fn hamiltonian_part(&self, drop_odd_term: bool) -> Grassmann {
        let mut s = self.pool.zero();
        for (h, o) in self.hamiltonians.iter().zip(&self.odd_terms) {
            s += h;
            if !drop_odd_term {
                s += o;
            }
        }
        s
    }

    /// Kinetic factors `exp(c · g* g)` still pending when slice `k` is
    /// integrated, as `(g*, g, c)`.
    fn kinetic_for(&self, k: usize) -> Vec<(GenId, GenId, f64)> {
        let mut out = Vec::new();
        let (here, here_star, next_star) = (self.plain(k), self.star(k), self.star(k + 1));
        for c in 0..self.n_cells {
            if k == 1 {
                out.push((here_star[c], self.beta[c], 1.0));
            }
            out.push((here_star[c], here[c], -1.0));
            out.push((next_star[c], here[c], 1.0));
        }
        out
    }

    /// Evaluates the integral: `exp` of the Hamiltonian part first, then for
    /// each interior slice the kinetic factors that involve it followed by
    /// its Berezin integration.
    pub fn evaluate(&self, drop_odd_term: bool) -> Result<SymbolExpr> {
        let p = &self.pool;
        let mut x = self.hamiltonian_part(drop_odd_term).exp();
        if self.slices() == 1 {
            // the kinetic part reduces to α*β - α*β
            return Ok(self.export(x));
        }
        let factor = |gs: GenId, g: GenId, c: f64| p.one() + (p.gen(gs) * p.gen(g)).scale_re(c);
        for k in 1..self.slices() {
            for (gs, g, c) in self.kinetic_for(k) {
                x = x * factor(gs, g, c);
            }
            for c in 0..self.n_cells {
                x = x.berezin(&[self.gamma_star[k - 1][c], self.gamma[k - 1][c]]);
            }
        }
        for c in 0..self.n_cells {
            x = x * factor(self.alpha[c], self.beta[c], -1.0);
        }
        Ok(self.export(x))
    }

    fn export(&self, x: Grassmann) -> SymbolExpr {
        SymbolExpr::export(SymbolKind::Covariant, &x, &self.pool, &self.alpha, &self.beta)
    }

    /// Text form of the action, one group of terms per line.
    pub fn render(&self) -> String {
        let p = &self.pool;
        let mut lines = Vec::new();
        let n = self.slices();
        let mut kinetic = p.zero();
        for k in 0..n {
            let (gs, g) = (self.star(k + 1), self.plain(k));
            for c in 0..self.n_cells {
                kinetic += &(p.gen(gs[c]) * p.gen(g[c]));
                if k > 0 {
                    let gk_star = self.star(k);
                    kinetic += &(-(p.gen(gk_star[c]) * p.gen(g[c])));
                }
            }
        }
        for c in 0..self.n_cells {
            kinetic += &(-(p.gen(self.alpha[c]) * p.gen(self.beta[c])));
        }
        lines.push(format!("kinetic: {}", p.render(&kinetic)));
        for (k, (h, o)) in self.hamiltonians.iter().zip(&self.odd_terms).enumerate() {
            lines.push(format!("H_{k}: {}", p.render(h)));
            if !o.is_zero() {
                lines.push(format!("O_{k}: {}", p.render(o)));
            }
        }
        lines.join("\n")
    }
}

/// The same integral as a transfer recursion: slice `k` is integrated right
/// after `exp(H_k)` joins the partial result. Merging `exp(H_k)` from the
/// left is what the `O_k` terms encode, so this evaluates the full action.
/// Its cost is linear in the number of slices.
pub fn path_integral_sliced(generators: &[SymbolExpr]) -> Result<SymbolExpr> {
    let Some(first) = generators.first() else {
        return Err(Error::EmptyWord);
    };
    let n = first.n_in;
    let mut pool = GeneratorPool::new();
    let alpha = (1..=n)
        .map(|c| pool.alloc(format!("α{c}*")))
        .collect::<Result<Vec<_>>>()?;
    let beta = (1..=n)
        .map(|c| pool.alloc(format!("β{c}")))
        .collect::<Result<Vec<_>>>()?;
    let mid = (1..=n)
        .map(|c| pool.alloc_pair(format!("γ{c}"), format!("γ{c}*")))
        .collect::<Result<Vec<_>>>()?;
    let (g, gs): (Vec<GenId>, Vec<GenId>) = mid.iter().copied().unzip();
    let p = &pool;
    let pairing = |left: &[GenId], right: &[GenId], c: f64| {
        left.iter().zip(right).fold(p.one(), |acc, (&l, &r)| {
            acc * (p.one() + (p.gen(l) * p.gen(r)).scale_re(c))
        })
    };
    // partial result G(γ_k*, β), stored with γ_k* in the α* slots
    let mut acc = first.import(p, &alpha, &beta).exp() * pairing(&alpha, &beta, 1.0);
    for h in &generators[1..] {
        let carried = acc.transplant(p.id(), |x| {
            alpha.iter().position(|&a| a == x).map_or(x, |i| gs[i])
        });
        let step = h.import(p, &alpha, &g).exp();
        let mut x = step * carried * pairing(&alpha, &g, 1.0) * pairing(&gs, &g, -1.0);
        for (&gi, &gsi) in g.iter().zip(&gs) {
            x = x.berezin(&[gsi, gi]);
        }
        acc = x;
    }
    let acc = acc * pairing(&alpha, &beta, -1.0);
    Ok(SymbolExpr::export(SymbolKind::Covariant, &acc, p, &alpha, &beta))
}

/// One evaluation method of an [`EvolutionReport`].
#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: String,
    pub symbol: SymbolExpr,
}

#[derive(Debug, Clone)]
pub struct EvolutionReport {
    pub label: String,
    pub results: Vec<MethodResult>,
    pub tolerance: f64,
}

impl EvolutionReport {
    /// Pairwise coefficient deviations `(i, j, deviation)`.
    pub fn deviations(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.results.len() {
            for j in i + 1..self.results.len() {
                let d = self.results[i].symbol.max_deviation(&self.results[j].symbol);
                out.push((i, j, d));
            }
        }
        out
    }

    pub fn max_deviation(&self) -> f64 {
        self.deviations().iter().map(|d| d.2).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() <= self.tolerance
    }
}

impl fmt::Display for EvolutionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word: {}", self.label)?;
        writeln!(f, "{:<24} {:>18}", "method", "symbol norm")?;
        for r in &self.results {
            writeln!(f, "{:<24} {:>18}", r.method, fmt_real(r.symbol.value.max_norm()))?;
        }
        for (i, j, d) in self.deviations() {
            writeln!(
                f,
                "{} vs {}: {:.3e} {}",
                self.results[i].method,
                self.results[j].method,
                d,
                if d <= self.tolerance { "PASS" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "max deviation {:.3e} (tolerance {:.0e}) {}",
            self.max_deviation(),
            self.tolerance,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Matrix product, convolution and path integral of one word side by side.
pub fn compare_word(w: &Word, tolerance: f64) -> Result<EvolutionReport> {
    let matrix = covariant_symbol(&word_matrix(w)?)?;
    let results = vec![
        MethodResult {
            method: "matrix".into(),
            symbol: matrix,
        },
        MethodResult {
            method: "convolution".into(),
            symbol: word_symbol_convolution(w)?,
        },
        MethodResult {
            method: "path integral".into(),
            symbol: word_symbol_path_integral(w, false)?,
        },
    ];
    Ok(EvolutionReport {
        label: w.to_string(),
        results,
        tolerance,
    })
}

/// Result of a sliced autonomous evolution.
#[derive(Debug, Clone)]
pub struct Autonomous {
    pub slices: usize,
    pub symbol: SymbolExpr,
    pub operator: FockOperator,
    pub reference: FockOperator,
    /// Largest entry deviation from `exp(-i t H)`.
    pub error: f64,
}

/// `exp(-i t H)` approximated by `n` slices with step symbols
/// `exp(-i Δt H(γ_{k+1}*, γ_k))`, compared with the dense exponential.
pub fn autonomous_evolve(
    h_sym: &SymbolExpr,
    h_mat: &FockOperator,
    t: f64,
    n: usize,
) -> Result<Autonomous> {
    if n == 0 {
        return Err(Error::Arity("at least one slice".into()));
    }
    let reference = h_mat.exp_hermitian(Complex64::new(0.0, -t))?;
    let cov = covariant_symbol(h_mat)?;
    let dev = cov.max_deviation(h_sym);
    if dev > 1e-10 {
        return Err(Error::Inconsistent(format!(
            "Hamiltonian symbol differs from its matrix by {dev:e}"
        )));
    }
    let dt = t / n as f64;
    let step_symbol = h_sym.value.scale(Complex64::new(0.0, -dt)).exp();
    let generator = h_sym.clone().with_value(|_, _| {
        step_symbol
            .ln()
            .expect("step symbol has scalar part 1")
    });
    let steps = vec![generator; n];
    let symbol = path_integral_sliced(&steps)?;
    let operator = symbol.to_operator()?;
    let error = operator.max_deviation(&reference);
    Ok(Autonomous {
        slices: n,
        symbol,
        operator,
        reference,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::single_cell;
    use crate::symbols::identity_symbol;
    use std::f64::consts::PI;

    #[test]
    fn single_letter_everywhere() {
        let w = Word::deutsch(&[0.9]);
        let g = make_gate("deutsch", Some(0.9)).unwrap();
        assert!(word_matrix(&w).unwrap().max_deviation(&g.matrix) < 1e-15);
        assert!(word_symbol_convolution(&w).unwrap().max_deviation(&g.symbol) < 1e-15);
        let pi = word_symbol_path_integral(&w, false).unwrap();
        assert!(pi.max_deviation(&g.symbol) < 1e-12);
    }

    #[test]
    fn order_of_letters() {
        let w = Word::deutsch(&[0.7, 1.1]);
        let expect = make_gate("deutsch", Some(1.1))
            .unwrap()
            .matrix
            .compose(&make_gate("deutsch", Some(0.7)).unwrap().matrix)
            .unwrap();
        assert!(word_matrix(&w).unwrap().max_deviation(&expect) < 1e-15);
        let cov = covariant_symbol(&expect).unwrap();
        assert!(word_symbol_convolution(&w).unwrap().max_deviation(&cov) < 1e-12);
    }

    #[test]
    fn three_way_agreement() {
        for phis in [vec![0.7, 0.7], vec![0.3, 1.2, 2.0], vec![0.1, 0.5, 0.9, 1.3]] {
            let r = compare_word(&Word::deutsch(&phis), 1e-10).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn odd_term_is_needed() {
        let w = Word::deutsch(&[0.7, 0.7]);
        let full = word_symbol_path_integral(&w, false).unwrap();
        let dropped = word_symbol_path_integral(&w, true).unwrap();
        assert!(full.max_deviation(&dropped) > 1e-6);
        let even = Word::deutsch(&[0.0, PI, 0.0]);
        let sa = Superaction::new(&word_generators(&even).unwrap()).unwrap();
        assert!(sa.odd_terms.iter().all(|o| o.max_norm() < 1e-12));
        let a = word_symbol_path_integral(&even, true).unwrap();
        let b = word_symbol_convolution(&even).unwrap();
        assert!(a.max_deviation(&b) < 1e-10);
    }

    #[test]
    fn sliced_matches_expanded() {
        let w = Word::deutsch(&[0.4, 1.0, 2.2]);
        let gens = word_generators(&w).unwrap();
        let a = path_integral_sliced(&gens).unwrap();
        let b = Superaction::new(&gens).unwrap().evaluate(false).unwrap();
        assert!(a.max_deviation(&b) < 1e-12);
    }

    #[test]
    fn prime_words_depend_on_the_sum() {
        let w = Word::deutsch_prime(&[0.3, -1.1, 0.5, 0.3]);
        let s = crate::gates::deutsch_prime(0.0).matrix;
        assert!(word_matrix(&w).unwrap().max_deviation(&s) < 1e-12);
        let sym = word_symbol_convolution(&w).unwrap();
        assert!(sym.max_deviation(&identity_symbol(3)) < 1e-10);
        assert_eq!(w.refine(2).len(), 8);
    }

    #[test]
    fn empty_and_nonexponential_words() {
        assert!(matches!(word_matrix(&Word::default()), Err(Error::EmptyWord)));
        let w = Word::new(vec![Letter::new("not", None)]);
        assert!(matches!(
            word_symbol_path_integral(&w, false),
            Err(Error::NoExponentialForm(_))
        ));
    }

    #[test]
    fn autonomous_refinement() {
        let (plus, minus, _) = single_cell();
        let h = plus.add(&minus);
        let hs = covariant_symbol(&h).unwrap();
        let errs: Vec<f64> = [4, 8, 16, 32]
            .iter()
            .map(|&n| autonomous_evolve(&hs, &h, 1.0, n).unwrap().error)
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
        let zero = autonomous_evolve(&hs, &h, 0.0, 5).unwrap();
        assert!(zero.symbol.max_deviation(&identity_symbol(1)) < 1e-15);
    }

    #[test]
    fn superaction_text() {
        let w = Word::deutsch(&[0.7, 0.7]);
        let sa = Superaction::new(&word_generators(&w).unwrap()).unwrap();
        let text = sa.render();
        assert!(text.starts_with("kinetic: "));
        assert!(text.contains("O_1: "));
    }
}
