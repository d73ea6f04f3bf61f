//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! status 1 if any criterion fails. Oracles are built here from first
//! principles (Jordan-Wigner matrices, dense products, transcribed closed
//! forms) rather than taken from the library under test.

use std::f64::consts::PI;
use std::process::ExitCode;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use superlogic::automaton::{
    autonomous_evolve, word_symbol_convolution, word_symbol_path_integral, Word,
};
use superlogic::composer::{build_circuit, fb_compose};
use superlogic::fb::{to_fb_operator, FbOperator};
use superlogic::fock::{self, annihilation, creation, FockOperator, FockVector};
use superlogic::gates::{make_gate, REGISTRY};
use superlogic::parse::parse_circuit;
use superlogic::symbols::{
    convolve, covariant_symbol, matrix_symbol, resolution_of_identity, SymbolExpr, SymbolKind,
};
use superlogic::{GenId, GeneratorPool, Grassmann};

const SEED: u64 = 0x5eed_a11c;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

// ---- oracles ---------------------------------------------------------------

/// Jordan-Wigner a_k^+ (cell 1 = least significant bit, string over cells > k)
/// as an integer matrix.
fn jw_creation(k: usize, n: usize) -> DMatrix<i64> {
    let dim = 1 << n;
    let bit = 1 << (k - 1);
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        if col & bit == 0 {
            let higher = (col >> k).count_ones();
            m[(col | bit, col)] = if higher % 2 == 0 { 1 } else { -1 };
        }
    }
    m
}

fn as_integer(op: &FockOperator) -> Option<DMatrix<i64>> {
    let e = &op.entries;
    let mut out = DMatrix::zeros(e.nrows(), e.ncols());
    for r in 0..e.nrows() {
        for col in 0..e.ncols() {
            let z = e[(r, col)];
            if z.im != 0.0 || z.re.fract() != 0.0 {
                return None;
            }
            out[(r, col)] = z.re as i64;
        }
    }
    Some(out)
}

/// Symbol of a state vector: Σ v_n α*_{k_m}…α*_{k_1} over occupied cells,
/// highest cell first.
fn oracle_state_symbol(v: &FockVector) -> SymbolExpr {
    let n = v.n_cells;
    SymbolExpr::blank(SymbolKind::State, n, 0).with_value(|p, s| {
        let mut acc = p.zero();
        for idx in 0..(1 << n) {
            let gens: Vec<GenId> = (0..n).rev().filter(|k| idx >> k & 1 == 1).map(|k| s.out[k]).collect();
            acc += &p.product(&gens).scale(v.amplitudes[idx]);
        }
        acc
    })
}

fn basis(m: usize, n: usize) -> FockVector {
    let mut amps = vec![c(0.0, 0.0); 1 << n];
    amps[m] = c(1.0, 0.0);
    FockVector::from_amplitudes(n, amps)
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(1 << n, 1 << n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

fn op(n: usize, m: DMatrix<C64>) -> FockOperator {
    FockOperator::new(n, n, m)
}

/// Printed symbol forms, transcribed.
fn printed_symbol(name: &str, phi: f64) -> SymbolExpr {
    let (kind, n_out, n_in) = match name {
        "not" => (SymbolKind::Covariant, 1, 1),
        "and" | "or" => (SymbolKind::Matrix, 1, 2),
        _ => (SymbolKind::Covariant, 3, 3),
    };
    SymbolExpr::blank(kind, n_out, n_in).with_value(|p, s| {
        let a = |k: usize| p.gen(s.out[k - 1]);
        let b = |k: usize| p.gen(s.inp[k - 1]);
        let one = p.one();
        match name {
            "not" => a(1) + b(1),
            "and" => &one + b(1) + b(2) + a(1) * b(1) * b(2),
            "or" => &one + a(1) * (b(1) + b(2) + b(1) * b(2)),
            "cc_not" => &one + a(3) * a(2) * (a(1) - &one) * (&one - b(1)) * b(2) * b(3),
            "deutsch" => &one + printed_h_value(p, &a, &b, phi),
            _ => unreachable!(),
        }
    })
}

fn printed_h_value(
    p: &GeneratorPool,
    a: &dyn Fn(usize) -> Grassmann,
    b: &dyn Fn(usize) -> Grassmann,
    phi: f64,
) -> Grassmann {
    let one = p.one();
    let even = (&one + a(1) * b(1)).scale(c(-1.0, phi.cos()));
    let odd = (a(1) + b(1)).scale_re(phi.sin());
    a(3) * a(2) * (even + odd) * b(2) * b(3)
}

fn printed_h(phi: f64) -> SymbolExpr {
    SymbolExpr::blank(SymbolKind::Covariant, 3, 3).with_value(|p, s| {
        let a = |k: usize| p.gen(s.out[k - 1]);
        let b = |k: usize| p.gen(s.inp[k - 1]);
        printed_h_value(p, &a, &b, phi)
    })
}

/// Printed Fock-Bargmann forms, with `d[k]` standing for ∂/∂α_k*.
fn printed_fb(name: &str) -> FbOperator {
    let n = if name == "not" { 1 } else { 3 };
    let mut p = GeneratorPool::new();
    let a: Vec<GenId> = (1..=n).map(|k| p.alloc(format!("a{k}")).unwrap()).collect();
    let d: Vec<GenId> = (1..=n).map(|k| p.alloc(format!("d{k}")).unwrap()).collect();
    let g = |x: GenId| p.gen(x);
    let one = p.one();
    let x = match name {
        "not" => g(a[0]) + g(d[0]),
        _ => &one + g(a[2]) * g(a[1]) * (g(a[0]) - &one) * (&one - g(d[0])) * g(d[1]) * g(d[2]),
    };
    FbOperator::from_grassmann(n, &x, &a, &d)
}

fn sample_param(name: &str) -> Option<f64> {
    match name {
        "deutsch" | "deutsch_prime" => Some(0.3),
        _ => None,
    }
}

// ---- criteria --------------------------------------------------------------

fn anticommutation() -> Outcome {
    let mut bad = 0;
    for n in 1..=4 {
        for i in 1..=n {
            let ci = creation(i, n).unwrap();
            let ai = annihilation(i, n).unwrap();
            let jw_c = jw_creation(i, n);
            if as_integer(&ci) != Some(jw_c.clone()) || as_integer(&ai) != Some(jw_c.transpose()) {
                bad += 1;
            }
            for j in 1..=n {
                let cj = creation(j, n).unwrap();
                let aj = annihilation(j, n).unwrap();
                let anti = |x: &FockOperator, y: &FockOperator| {
                    as_integer(&op(n, &x.entries * &y.entries + &y.entries * &x.entries))
                };
                let dim = 1 << n;
                let delta = if i == j { DMatrix::identity(dim, dim) } else { DMatrix::zeros(dim, dim) };
                let zero = DMatrix::zeros(dim, dim);
                bad += (anti(&ci, &aj) != Some(delta)) as usize;
                bad += (anti(&ci, &cj) != Some(zero.clone())) as usize;
                bad += (anti(&ai, &aj) != Some(zero)) as usize;
            }
        }
    }
    outcome(bad == 0, format!("{bad} violations over N = 1..4 (exact integer comparison)"))
}

fn identity_resolution() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let r = resolution_of_identity(n).unwrap();
        let dim = 1 << n;
        let id = DMatrix::<C64>::identity(dim, dim);
        worst = worst.max((&r.entries - id).iter().fold(0.0, |m, z| m.max(z.norm())));
    }
    outcome(worst < 1e-12, format!("max deviation {worst:.3e} over N = 1..3 (tol 1e-12)"))
}

fn closed_forms() -> Outcome {
    let mut cases: Vec<(String, f64)> = Vec::new();
    for name in ["not", "and", "or", "cc_not"] {
        let g = make_gate(name, None).unwrap();
        let computed = if g.is_square() {
            covariant_symbol(&g.matrix).unwrap()
        } else {
            matrix_symbol(&g.matrix)
        };
        cases.push((name.into(), computed.max_deviation(&printed_symbol(name, 0.0))));
    }
    for phi in [0.0, 0.3, PI / 2.0, 1.7] {
        let computed = covariant_symbol(&fock::deutsch_matrix(phi)).unwrap();
        cases.push((format!("D({phi:.4})"), computed.max_deviation(&printed_symbol("deutsch", phi))));
    }
    let failed: Vec<String> = cases
        .iter()
        .filter(|(_, d)| *d >= 1e-12)
        .map(|(n, d)| format!("{n} off by {d:.3e}"))
        .collect();
    let detail = if failed.is_empty() {
        "all printed forms reproduced (tol 1e-12)".to_string()
    } else {
        format!("{} (tol 1e-12)", failed.join(", "))
    };
    outcome(failed.is_empty(), detail)
}

fn convolution_theorem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for _ in 0..50 {
            let a = random_matrix(&mut rng, n);
            let b = random_matrix(&mut rng, n);
            let ab = op(n, &a * &b);
            let sa = covariant_symbol(&op(n, a)).unwrap();
            let sb = covariant_symbol(&op(n, b)).unwrap();
            let lhs = covariant_symbol(&ab).unwrap();
            worst = worst.max(lhs.max_deviation(&convolve(&sa, &sb).unwrap()));
        }
    }
    outcome(worst < 1e-10, format!("max deviation {worst:.3e} over 150 pairs (tol 1e-10)"))
}

fn fock_bargmann() -> Outcome {
    let mut worst: f64 = 0.0;
    for spec in REGISTRY {
        let g = make_gate(spec.name, sample_param(spec.name)).unwrap();
        let fb = to_fb_operator(&g.matrix);
        for m in 0..(1 << spec.n_in) {
            let f = basis(m, spec.n_in);
            let image = FockVector::from_amplitudes(
                spec.n_out,
                (&g.matrix.entries * &f.amplitudes).iter().copied().collect(),
            );
            let got = fb.apply(&oracle_state_symbol(&f)).unwrap();
            worst = worst.max(got.max_deviation(&oracle_state_symbol(&image)));
        }
    }
    let mut printed = Vec::new();
    for name in ["not", "cc_not"] {
        let computed = to_fb_operator(&make_gate(name, None).unwrap().matrix);
        printed.push((name, computed.max_deviation(&printed_fb(name))));
    }
    let pass = worst < 1e-12 && printed.iter().all(|(_, d)| *d < 1e-12);
    let forms: Vec<String> = printed.iter().map(|(n, d)| format!("{n} printed form off by {d:.3e}")).collect();
    outcome(pass, format!("basis action max deviation {worst:.3e}; {} (tol 1e-12)", forms.join(", ")))
}

fn composite_gates() -> Outcome {
    let circuits: [(&str, fn(bool, bool, bool) -> bool); 2] = [
        ("and(w1, or(w2, w3))", |a, b, c| a && (b || c)),
        ("and(or(w1, w2), w3)", |a, b, c| (a || b) && c),
    ];
    let mut bad = 0;
    for (text, truth) in circuits {
        let tree = parse_circuit(text).unwrap();
        let g = build_circuit(&tree).unwrap();
        let from_symbol = g.matrix_symbol().to_operator().unwrap();
        let fb = fb_compose(&tree).unwrap();
        for m in 0..8 {
            let want = truth(m & 1 == 1, m & 2 == 2, m & 4 == 4) as usize;
            let column = |o: &FockOperator| -> Vec<C64> { (0..2).map(|r| o.entries[(r, m)]).collect() };
            let expect: Vec<C64> = (0..2).map(|r| c((r == want) as u8 as f64, 0.0)).collect();
            let close = |v: Vec<C64>| v.iter().zip(&expect).all(|(x, y)| (x - y).norm() < 1e-12);
            bad += !close(column(&g.matrix)) as usize;
            bad += !close(column(&from_symbol)) as usize;
            let out = fb.apply(&oracle_state_symbol(&basis(m, 3))).unwrap();
            bad += (out.max_deviation(&oracle_state_symbol(&basis(want, 1))) >= 1e-12) as usize;
        }
    }
    outcome(bad == 0, format!("{bad} mismatches over 2 circuits × 8 inputs × 3 routes"))
}

fn deutsch_identities() -> Outcome {
    let mut notes = Vec::new();
    let d = fock::deutsch_matrix(PI / 2.0);
    let toffoli = fock::cc_not_matrix();
    let m_dev = d.max_deviation(&toffoli);
    let s_dev = make_gate("deutsch", Some(PI / 2.0))
        .unwrap()
        .symbol
        .max_deviation(&make_gate("cc_not", None).unwrap().symbol);
    notes.push(format!("D(π/2) vs cc_not {:.3e}", m_dev.max(s_dev)));
    let mut semigroup: f64 = 0.0;
    for (a, b) in [(0.3, 0.5), (1.1, -0.4), (2.0, 2.5)] {
        let da = fock::deutsch_prime_matrix(a);
        let db = fock::deutsch_prime_matrix(b);
        let dab = fock::deutsch_prime_matrix(a + b);
        semigroup = semigroup.max(op(3, &da.entries * &db.entries).max_deviation(&dab));
        let sa = covariant_symbol(&da).unwrap();
        let sb = covariant_symbol(&db).unwrap();
        let sab = covariant_symbol(&dab).unwrap();
        semigroup = semigroup.max(convolve(&sa, &sb).unwrap().max_deviation(&sab));
    }
    notes.push(format!("D'(a)D'(b) vs D'(a+b) {semigroup:.3e}"));
    let mut exp_form: f64 = 0.0;
    for phi in [0.0, 0.3, 0.7, PI / 2.0, 1.7, 2.9] {
        let h = printed_h(phi);
        let e = h.clone().with_value(|_, _| h.value.exp());
        exp_form = exp_form.max(e.max_deviation(&printed_symbol("deutsch", phi)));
        let g = make_gate("deutsch", Some(phi)).unwrap();
        let gen = g.generator().unwrap();
        let e = gen.clone().with_value(|_, _| gen.value.exp());
        exp_form = exp_form.max(e.max_deviation(&covariant_symbol(&g.matrix).unwrap()));
    }
    notes.push(format!("exp(H(φ)) vs D(φ) symbol {exp_form:.3e}"));
    let pass = m_dev < 1e-12 && s_dev < 1e-12 && semigroup < 1e-10 && exp_form < 1e-12;
    outcome(pass, format!("{} (tol 1e-12, 1e-10, 1e-12)", notes.join("; ")))
}

fn automaton_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut worst: f64 = 0.0;
    for trial in 0..12 {
        let len = 1 + trial % 4;
        let phis: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        let mut u = DMatrix::<C64>::identity(8, 8);
        for &phi in &phis {
            u = &fock::deutsch_matrix(phi).entries * u;
        }
        let by_matrix = covariant_symbol(&op(3, u)).unwrap();
        let w = Word::deutsch(&phis);
        let by_conv = word_symbol_convolution(&w).unwrap();
        let by_path = word_symbol_path_integral(&w, false).unwrap();
        worst = worst
            .max(by_matrix.max_deviation(&by_conv))
            .max(by_matrix.max_deviation(&by_path))
            .max(by_conv.max_deviation(&by_path));
    }
    let w = Word::deutsch(&[0.7, 0.7]);
    let full = word_symbol_path_integral(&w, false).unwrap();
    let dropped = word_symbol_path_integral(&w, true).unwrap();
    let gap = full.max_deviation(&dropped);
    outcome(
        worst < 1e-10 && gap > 1e-6,
        format!("pairwise max deviation {worst:.3e} (tol 1e-10); without O_k at φ = 0.7: {gap:.3e} (need > 1e-6)"),
    )
}

fn exp_rule() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut p = GeneratorPool::new();
    for k in 1..=8 {
        p.alloc(format!("θ{k}")).unwrap();
    }
    let mut random_nilpotent = |p: &GeneratorPool| {
        let mut terms = Vec::new();
        for mask in 1u128..256 {
            if rng.gen_bool(0.4) {
                terms.push((mask, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
            }
        }
        Grassmann::from_terms(p.id(), terms)
    };
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = random_nilpotent(&p);
        let y = random_nilpotent(&p);
        let lhs = x.exp() * y.exp();
        let rhs = (&x + &y + x.odd_part() * y.odd_part()).exp();
        worst = worst.max(lhs.max_deviation(&rhs) / lhs.max_norm().max(1.0));
    }
    outcome(worst < 1e-12, format!("max relative deviation {worst:.3e} over 100 pairs in Λ_8 (tol 1e-12)"))
}

fn autonomous_convergence() -> Outcome {
    let x = fock::not_matrix();
    let h_sym = covariant_symbol(&x).unwrap();
    let reference = DMatrix::<C64>::identity(2, 2).map(|z| z * 1.0f64.cos())
        - x.entries.map(|z| z * c(0.0, 1.0f64.sin()));
    let mut errors = Vec::new();
    for n in [4, 8, 16, 32] {
        let run = autonomous_evolve(&h_sym, &x, 1.0, n).unwrap();
        let err = (&run.operator.entries - &reference).iter().fold(0.0, |m: f64, z| m.max(z.norm()));
        errors.push(err);
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let last = errors[3];
    let listed: Vec<String> = errors.iter().map(|e| format!("{e:.3e}")).collect();
    outcome(
        monotone && last < 1e-2,
        format!("errors n = 4, 8, 16, 32: {} (monotone: {monotone}; need < 1e-2 at n = 32)", listed.join(", ")),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("anticommutation relations", anticommutation),
        ("resolution of the identity", identity_resolution),
        ("printed closed-form symbols", closed_forms),
        ("convolution theorem", convolution_theorem),
        ("Fock-Bargmann faithfulness", fock_bargmann),
        ("composite gates C1, C2", composite_gates),
        ("Deutsch identities", deutsch_identities),
        ("automaton three-way agreement", automaton_agreement),
        ("exp composition rule", exp_rule),
        ("autonomous convergence", autonomous_convergence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += !o.pass as usize;
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
