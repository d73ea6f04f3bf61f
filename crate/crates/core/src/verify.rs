//! Invariant suites behind `superlogic verify`.
//!
//! Every check reports a measured deviation against a bound. Random inputs
//! come from a fixed-seed generator, so reports are reproducible. Lines
//! marked `INFO` document known gaps between the quoted closed forms and
//! the computed objects; they never fail a suite.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{
    autonomous_evolve, compare_word, word_generators, word_matrix, word_symbol_convolution,
    word_symbol_path_integral, Superaction, Word,
};
use crate::composer::{build_circuit, fb_compose, plug_input, Child, CircuitNode};
use crate::error::Result;
use crate::fock::{self, annihilation, creation, FockOperator, FockVector};
use crate::gates::{
    closed_form_deutsch_generator, closed_form_fb, closed_form_symbol, deutsch_prime, make_gate,
    b_logic_scan, REGISTRY,
};
use crate::grassmann::{GenId, GeneratorPool, Grassmann, Mask};
use crate::symbols::{
    basis_state, coherent_ket, convolve, covariant_symbol, identity_symbol, overlap,
    resolution_of_identity, scalar_product, shifted_matrix_symbol, state_symbol,
};

pub const SEED: u64 = 0x5eed_1a6e;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    Above(f64),
    Info,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound: Bound::AtMost(tol),
        }
    }

    pub fn above(name: impl Into<String>, value: f64, floor: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound: Bound::Above(floor),
        }
    }

    pub fn info(name: impl Into<String>, value: f64) -> Check {
        Check {
            name: name.into(),
            value,
            bound: Bound::Info,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost(t) => self.value <= t,
            Bound::Above(t) => self.value > t,
            Bound::Info => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (bound, status) = match self.bound {
            Bound::AtMost(t) => (format!("<= {t:.0e}"), if self.passed() { "PASS" } else { "FAIL" }),
            Bound::Above(t) => (format!(">  {t:.0e}"), if self.passed() { "PASS" } else { "FAIL" }),
            Bound::Info => ("-".to_string(), "INFO"),
        };
        write!(f, "{:<56} {:>11.3e} {:>9} {}", self.name, self.value, bound, status)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Algebra,
    Symbols,
    Gates,
    Composer,
    Automaton,
    All,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "algebra" => Scope::Algebra,
            "symbols" => Scope::Symbols,
            "gates" => Scope::Gates,
            "composer" => Scope::Composer,
            "automaton" => Scope::Automaton,
            "all" => Scope::All,
            _ => return Err(format!("unknown scope `{s}`")),
        })
    }
}

pub fn run(scope: Scope) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    Ok(match scope {
        Scope::Algebra => algebra(&mut rng)?,
        Scope::Symbols => symbols(&mut rng)?,
        Scope::Gates => gates()?,
        Scope::Composer => composer()?,
        Scope::Automaton => automaton(&mut rng)?,
        Scope::All => {
            let mut all = algebra(&mut rng)?;
            all.extend(symbols(&mut rng)?);
            all.extend(gates()?);
            all.extend(composer()?);
            all.extend(automaton(&mut rng)?);
            all
        }
    })
}

fn coeff(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random element over the generators `gens`, each monomial present with
/// probability `density`, restricted to masks accepted by `keep`.
pub fn random_element(
    rng: &mut impl Rng,
    pool: &GeneratorPool,
    gens: &[GenId],
    density: f64,
    keep: impl Fn(Mask) -> bool,
) -> Grassmann {
    let mut terms = Vec::new();
    for sub in 0u64..(1 << gens.len()) {
        let mask = gens
            .iter()
            .enumerate()
            .filter(|(i, _)| sub >> i & 1 == 1)
            .fold(0, |m, (_, g)| m | g.bit());
        if keep(mask) && rng.gen_bool(density) {
            terms.push((mask, coeff(rng)));
        }
    }
    Grassmann::from_terms(pool.id(), terms)
}

pub fn random_operator(rng: &mut impl Rng, n_in: usize, n_out: usize) -> FockOperator {
    let m = DMatrix::from_fn(1 << n_out, 1 << n_in, |_, _| coeff(rng));
    FockOperator::new(n_in, n_out, m)
}

pub fn random_state(rng: &mut impl Rng, n: usize) -> FockVector {
    FockVector::from_amplitudes(n, (0..1 << n).map(|_| coeff(rng)).collect())
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn algebra(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut pool = GeneratorPool::new();
    let gens: Vec<GenId> = (1..=8)
        .map(|k| pool.alloc(format!("θ{k}")))
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();

    let mut d = 0.0f64;
    for _ in 0..30 {
        let [x, y, z] = [0; 3].map(|_| random_element(rng, &pool, &gens, 0.2, |_| true));
        d = d.max(((&x * &y) * &z).max_deviation(&(&x * &(&y * &z))));
        d = d.max((&x * &(&y + &z)).max_deviation(&(&x * &y + &x * &z)));
    }
    checks.push(Check::at_most("associativity and distributivity (Λ_8)", d, 1e-12));

    let mut d = 0.0f64;
    for _ in 0..30 {
        let p: u32 = rng.gen_range(0..2);
        let q: u32 = rng.gen_range(0..2);
        let x = random_element(rng, &pool, &gens, 0.2, |m| m.count_ones() % 2 == p);
        let y = random_element(rng, &pool, &gens, 0.2, |m| m.count_ones() % 2 == q);
        let sign = if p * q == 1 { -1.0 } else { 1.0 };
        d = d.max((&x * &y).max_deviation(&(&y * &x).scale_re(sign)));
    }
    checks.push(Check::at_most("graded commutativity", d, 1e-12));

    let mut d = 0.0f64;
    for _ in 0..30 {
        let x = random_element(rng, &pool, &gens, 0.3, |_| true);
        let (a, b) = (gens[rng.gen_range(0..8)], gens[rng.gen_range(0..8)]);
        let ab = x.left_derivative(b).left_derivative(a);
        let ba = x.left_derivative(a).left_derivative(b);
        d = d.max((&ab + &ba).max_norm());
    }
    checks.push(Check::at_most("derivatives anticommute, ∂∂ = 0", d, 1e-12));

    let mut d = 0.0f64;
    for _ in 0..30 {
        let x = random_element(rng, &pool, &gens, 0.3, |_| true);
        let (a, b) = (gens[rng.gen_range(0..8)], gens[rng.gen_range(0..8)]);
        if a != b {
            d = d.max((&x.berezin(&[a, b]) + &x.berezin(&[b, a])).max_norm());
        }
    }
    checks.push(Check::at_most("Fubini: swapping two integrations flips the sign", d, 1e-12));

    let mut ipool = GeneratorPool::new();
    let pairs: Vec<(GenId, GenId)> = (1..=4)
        .map(|k| ipool.alloc_pair(format!("η{k}"), format!("η{k}*")))
        .collect::<Result<_>>()?;
    let all: Vec<GenId> = pairs.iter().flat_map(|p| [p.0, p.1]).collect();
    let mut d = 0.0f64;
    for _ in 0..30 {
        let x = random_element(rng, &ipool, &all, 0.1, |_| true);
        let y = random_element(rng, &ipool, &all, 0.1, |_| true);
        let lhs = ipool.involution(&(&x * &y))?;
        let rhs = ipool.involution(&y)? * ipool.involution(&x)?;
        d = d.max(lhs.max_deviation(&rhs));
    }
    checks.push(Check::at_most("involution reverses products", d, 1e-12));

    let (g, gs) = pairs[0];
    let gauss = (-(ipool.gen(gs) * ipool.gen(g))).exp().berezin(&[gs, g]);
    checks.push(Check::at_most(
        "∫ exp(-γ*γ) dγ* dγ = 1",
        (gauss.scalar_part() - 1.0).norm() + (gauss.len() as f64 - 1.0).abs(),
        1e-15,
    ));

    let mut d = 0.0f64;
    let mut dl = 0.0f64;
    for _ in 0..100 {
        let x = random_element(rng, &pool, &gens, 0.15, |m| m != 0);
        let y = random_element(rng, &pool, &gens, 0.15, |m| m != 0);
        let lhs = x.exp() * y.exp();
        let rhs = (&x + &y + x.odd_part() * y.odd_part()).exp();
        d = d.max(lhs.max_deviation(&rhs));
        let one_plus = pool.one() + &x;
        dl = dl.max(one_plus.ln()?.exp().max_deviation(&one_plus));
    }
    checks.push(Check::at_most("exp(x)exp(y) = exp(x + y + x^o y^o), 100 pairs", d, 1e-10));
    checks.push(Check::at_most("exp(ln(1 + x)) = 1 + x", dl, 1e-10));

    for n in 1..=4 {
        let report = fock::pauli_string_identity_checks(n)?;
        checks.push(Check::at_most(
            format!("canonical anticommutation relations, N={n}"),
            report.max_deviation(),
            0.0,
        ));
    }
    Ok(checks)
}

fn symbols(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for n in 1..=3 {
        let mut pool = GeneratorPool::new();
        let gens: Vec<GenId> = (1..=n)
            .map(|k| pool.alloc_pair(format!("α{k}"), format!("α{k}*")).map(|p| p.0))
            .collect::<Result<_>>()?;
        let ket = coherent_ket(&pool, &gens);
        let mut d = 0.0f64;
        for k in 1..=n {
            let lhs = ket.apply(&annihilation(k, n)?)?;
            let rhs = ket.times_right(&pool.gen(gens[k - 1]));
            d = d.max(lhs.max_deviation(&rhs));
        }
        checks.push(Check::at_most(format!("a_k^-|α> = |α>α_k, N={n}"), d, 1e-15));
    }
    for n in 1..=3 {
        let r = resolution_of_identity(n)?;
        checks.push(Check::at_most(
            format!("resolution of the identity, N={n}"),
            r.max_deviation(&FockOperator::identity(n)),
            1e-12,
        ));
    }
    for n in 1..=3 {
        let mut d = 0.0f64;
        for _ in 0..50 {
            let a = random_operator(rng, n, n);
            let b = random_operator(rng, n, n);
            let lhs = covariant_symbol(&a.compose(&b)?)?;
            let rhs = convolve(&covariant_symbol(&a)?, &covariant_symbol(&b)?)?;
            d = d.max(lhs.max_deviation(&rhs));
        }
        checks.push(Check::at_most(format!("convolution theorem, 50 pairs, N={n}"), d, 1e-10));
    }
    let mut d = 0.0f64;
    for n in 1..=3 {
        for k in 1..=n {
            let plus = covariant_symbol(&creation(k, n)?)?;
            let minus = covariant_symbol(&annihilation(k, n)?)?;
            let want_plus = plus.pool().gen(plus.out_gen(k - 1));
            let want_minus = minus.pool().gen(minus.in_gen(k - 1));
            d = d.max(plus.value.max_deviation(&want_plus));
            d = d.max(minus.value.max_deviation(&want_minus));
        }
    }
    checks.push(Check::at_most("a_k^+ -> α_k*, a_k^- -> β_k", d, 1e-15));

    let mut pool = GeneratorPool::new();
    let (b, bs) = pool.alloc_pair("β", "β*")?;
    let ov = overlap(&pool, &[bs], &[b])?;
    let want = pool.one() + pool.gen(bs) * pool.gen(b);
    checks.push(Check::at_most("<α*|β> = 1 + α*β, N=1", ov.max_deviation(&want), 0.0));

    let mut d = 0.0f64;
    for n in 1..=3 {
        for _ in 0..10 {
            let f = random_state(rng, n);
            let g = random_state(rng, n);
            let s = scalar_product(&state_symbol(&f), &state_symbol(&g))?;
            d = d.max((s - f.inner(&g)).norm());
        }
    }
    checks.push(Check::at_most("scalar product of state symbols", d, 1e-12));

    let mut d = 0.0f64;
    for spec in REGISTRY {
        let g = make_gate(spec.name, spec.takes_param.then_some(0.7))?;
        for m in 0..1 << g.n_in {
            let f = basis_state(m, g.n_in);
            let lhs = g.fb.apply(&state_symbol(&f))?;
            let rhs = state_symbol(&g.matrix.apply(&f)?);
            d = d.max(lhs.max_deviation(&rhs));
        }
    }
    checks.push(Check::at_most("Fock-Bargmann action on basis symbols, all gates", d, 1e-12));
    Ok(checks)
}

fn closed_form_checks(checks: &mut Vec<Check>, name: &str, param: Option<f64>) -> Result<()> {
    let g = make_gate(name, param)?;
    let cf = closed_form_symbol(name, param)?;
    let label = g.label();
    let printed_shifted = name == "cc_not" || name == "deutsch";
    if printed_shifted {
        let shifted = shifted_matrix_symbol(&g.matrix)?;
        let d = cf.value.max_deviation(&shifted.value);
        checks.push(Check::at_most(format!("{label}: closed form = 1 + <α*|G-1|β>"), d, 1e-12));
    }
    let d = g.symbol.max_deviation(&cf);
    if printed_shifted {
        checks.push(Check::info(format!("{label}: closed form vs covariant symbol"), d));
    } else {
        checks.push(Check::at_most(format!("{label}: closed form = symbol"), d, 1e-12));
    }
    Ok(())
}

fn gates() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut d = 0.0f64;
    for spec in REGISTRY {
        let g = make_gate(spec.name, spec.takes_param.then_some(1.3))?;
        d = d.max(g.matrix_symbol().max_deviation(&crate::symbols::matrix_symbol(&g.matrix)));
        if let Some(h) = &g.exp_generator {
            d = d.max(h.value.exp().max_deviation(&g.symbol.value));
        }
    }
    checks.push(Check::at_most("stored symbols and exp generators match matrices", d, 1e-12));
    for name in ["not", "and", "or", "cc_not"] {
        closed_form_checks(&mut checks, name, None)?;
    }
    for phi in [0.0, 0.3, PI / 2.0, 1.7] {
        closed_form_checks(&mut checks, "deutsch", Some(phi))?;
    }
    let d = make_gate("deutsch", Some(PI / 2.0))?
        .matrix
        .max_deviation(&make_gate("cc_not", None)?.matrix);
    checks.push(Check::at_most("D(π/2) = cc_not", d, 1e-15));
    let mut d = 0.0f64;
    let mut dodd = 0.0f64;
    for phi in [0.0, 0.3, PI / 2.0, 1.7] {
        let h = closed_form_deutsch_generator(phi);
        let cf = closed_form_symbol("deutsch", Some(phi))?;
        d = d.max(h.value.exp().max_deviation(&cf.value));
        let g = make_gate("deutsch", Some(phi))?;
        dodd = dodd.max(g.generator()?.value.odd_part().max_deviation(&h.value.odd_part()));
    }
    checks.push(Check::at_most("exp(H(φ)) = closed-form D(φ) symbol", d, 1e-12));
    checks.push(Check::at_most("odd part of ln D(φ) = odd part of H(φ)", dodd, 1e-12));
    let mut d = 0.0f64;
    for (a, b) in [(0.3, 0.4), (PI / 2.0, PI / 2.0), (1.0, -1.0)] {
        let lhs = deutsch_prime(a).matrix.compose(&deutsch_prime(b).matrix)?;
        d = d.max(lhs.max_deviation(&deutsch_prime(a + b).matrix));
    }
    checks.push(Check::at_most("D'(a)D'(b) = D'(a+b)", d, 1e-12));
    let ok = b_logic_scan().iter().all(|(_, c, i)| c == i);
    checks.push(Check::flag("D'(kπ/8) classical only when identity", ok));
    let not = make_gate("not", None)?;
    checks.push(Check::at_most(
        "not: FB form = α* + ∂/∂α*",
        not.fb.max_deviation(&closed_form_fb("not")?),
        1e-12,
    ));
    let t = make_gate("cc_not", None)?;
    checks.push(Check::info(
        "cc_not: closed FB form vs normal-ordered form",
        t.fb.max_deviation(&closed_form_fb("cc_not")?),
    ));
    Ok(checks)
}

pub fn c1() -> CircuitNode {
    CircuitNode::new(
        "and",
        None,
        vec![
            Child::Wire(1),
            Child::Node(CircuitNode::single("or", None).expect("registered").shifted(1)),
        ],
    )
}

pub fn c2() -> CircuitNode {
    CircuitNode::new(
        "and",
        None,
        vec![
            Child::Node(CircuitNode::single("or", None).expect("registered")),
            Child::Wire(3),
        ],
    )
}

/// Truth table of a 3-input circuit by three routes: matrix, split-formula
/// symbol and composed FB operator. Returns the number of mismatches.
pub fn three_route_mismatches(tree: &CircuitNode, want: impl Fn(bool, bool, bool) -> bool) -> Result<usize> {
    let g = build_circuit(tree)?;
    let fb = fb_compose(tree)?;
    let from_symbol = g.matrix_symbol().to_operator()?;
    let mut bad = 0;
    for m in 0..8 {
        let expect = want(m & 1 != 0, m & 2 != 0, m & 4 != 0) as usize;
        let f = basis_state(m, 3);
        let out = state_symbol(&basis_state(expect, 1));
        let by_matrix = g.matrix.classical_image(m, 1e-12) == Some(expect);
        let by_symbol = from_symbol.classical_image(m, 1e-12) == Some(expect);
        let by_fb = fb.apply(&state_symbol(&f))?.max_deviation(&out) < 1e-12;
        bad += [by_matrix, by_symbol, by_fb].iter().filter(|ok| !**ok).count();
    }
    Ok(bad)
}

fn composer() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let bad = three_route_mismatches(&c1(), |a, b, c| a && (b || c))?;
    checks.push(Check::at_most("C1 = n1 ∧ (n2 ∨ n3) by matrix, symbol, FB", bad as f64, 0.0));
    let bad = three_route_mismatches(&c2(), |a, b, c| (a || b) && c)?;
    checks.push(Check::at_most("C2 = (n1 ∨ n2) ∧ n3 by matrix, symbol, FB", bad as f64, 0.0));
    let nand = CircuitNode::new(
        "nand",
        None,
        vec![
            Child::Wire(1),
            Child::Node(CircuitNode::single("and", None)?.shifted(1)),
        ],
    );
    let bad = three_route_mismatches(&nand, |a, b, c| !(a && b && c))?;
    checks.push(Check::at_most("nand(w1, and(w2, w3)) = ¬(n1 ∧ n2 ∧ n3)", bad as f64, 0.0));

    let mut d = 0.0f64;
    let hosts = ["and", "or", "xor", "cc_not", "deutsch"];
    let plugs = ["not", "and", "or", "xor", "nand", "id"];
    for h in hosts {
        let host = make_gate(h, (h == "deutsch").then_some(0.4))?;
        for p in plugs {
            let b = make_gate(p, None)?;
            for k in 1..=host.n_in {
                let g = plug_input(&host, k, &b)?;
                d = d.max(g.matrix_symbol().max_deviation(&crate::symbols::matrix_symbol(&g.matrix)));
            }
        }
    }
    checks.push(Check::at_most("plug formula = tensor-embedded matrix, all pairs", d, 1e-10));

    let mut d = 0.0f64;
    for name in ["cc_not", "deutsch"] {
        let tree = CircuitNode::new(
            name,
            (name == "deutsch").then_some(0.9),
            vec![
                Child::Node(CircuitNode::single("not", None)?),
                Child::Node(CircuitNode::single("xor", None)?.shifted(1)),
                Child::Wire(4),
            ],
        );
        let g = build_circuit(&tree)?;
        let fb = fb_compose(&tree)?;
        for m in 0..16 {
            let f = basis_state(m, 4);
            let lhs = fb.apply(&state_symbol(&f))?;
            d = d.max(lhs.max_deviation(&state_symbol(&g.matrix.apply(&f)?)));
        }
    }
    checks.push(Check::at_most("FB composition with odd inner gates", d, 1e-12));
    Ok(checks)
}

fn automaton(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut d = 0.0f64;
    for len in 1..=4 {
        for _ in 0..3 {
            let phis: Vec<f64> = (0..len).map(|_| rng.gen_range(-PI..PI)).collect();
            d = d.max(compare_word(&Word::deutsch(&phis), 1e-10)?.max_deviation());
        }
    }
    checks.push(Check::at_most("matrix = convolution = path integral, Deutsch words", d, 1e-10));

    let w = Word::deutsch(&[0.7, 0.7]);
    let full = word_symbol_path_integral(&w, false)?;
    let dropped = word_symbol_path_integral(&w, true)?;
    checks.push(Check::above("dropping O_k breaks agreement, φ = 0.7", full.max_deviation(&dropped), 1e-6));

    let even = Word::deutsch(&[0.0, PI, 0.0]);
    let sa = Superaction::new(&word_generators(&even)?)?;
    let o = worst(sa.odd_terms.iter().map(|o| o.max_norm()));
    let d = word_symbol_path_integral(&even, true)?.max_deviation(&word_symbol_convolution(&even)?);
    checks.push(Check::at_most("even Hamiltonians: O_k = 0 and exact agreement", o.max(d), 1e-10));

    let mut d = 0.0f64;
    for phis in [vec![0.3, 0.4], vec![1.0, -0.5, 0.2, 0.8], vec![PI / 2.0, PI / 2.0]] {
        let total: f64 = phis.iter().sum();
        let w = Word::deutsch_prime(&phis);
        d = d.max(word_matrix(&w)?.max_deviation(&deutsch_prime(total).matrix));
        let sym = covariant_symbol(&deutsch_prime(total).matrix)?;
        d = d.max(word_symbol_convolution(&w)?.max_deviation(&sym));
    }
    checks.push(Check::at_most("D' words depend only on Σφ", d, 1e-10));

    let h = fock::not_matrix();
    let hs = covariant_symbol(&h)?;
    let errs = [4, 8, 16, 32]
        .iter()
        .map(|&n| autonomous_evolve(&hs, &h, 1.0, n).map(|r| r.error))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = errs.windows(2).all(|w| w[1] < w[0]);
    checks.push(Check::flag("autonomous error decreases over n = 4, 8, 16, 32", monotone));
    checks.push(Check::info("autonomous error at n = 32 (H = a^+ + a^-, t = 1)", errs[3]));
    let zero = autonomous_evolve(&hs, &h, 0.0, 7)?;
    checks.push(Check::at_most(
        "t = 0 gives the identity symbol",
        zero.symbol.max_deviation(&identity_symbol(1)),
        1e-15,
    ));
    Ok(checks)
}
