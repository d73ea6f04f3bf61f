use num_complex::Complex64;
use proptest::prelude::*;
use superlogic::grassmann::Mask;
use superlogic::{GenId, GeneratorPool, Grassmann};

const N: u32 = 6;
const TOL: f64 = 1e-10;

fn pool() -> (GeneratorPool, Vec<GenId>) {
    let mut p = GeneratorPool::new();
    let mut gens = Vec::new();
    for k in 1..=N / 2 {
        let (a, b) = p.alloc_pair(format!("x{k}"), format!("x{k}*")).unwrap();
        gens.push(a);
        gens.push(b);
    }
    (p, gens)
}

type Terms = Vec<(Mask, (f64, f64))>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((0..(1u128 << N), (-2.0..2.0f64, -2.0..2.0f64)), 0..10)
}

fn build(p: &GeneratorPool, t: &Terms) -> Grassmann {
    Grassmann::from_terms(p.id(), t.iter().map(|&(m, (re, im))| (m, Complex64::new(re, im))))
}

fn homogeneous(p: &GeneratorPool, t: &Terms, parity: u32) -> Grassmann {
    let kept: Terms = t.iter().copied().filter(|(m, _)| m.count_ones() % 2 == parity).collect();
    build(p, &kept)
}

proptest! {
    #[test]
    fn associative(a in terms(), b in terms(), c in terms()) {
        let (p, _) = pool();
        let (a, b, c) = (build(&p, &a), build(&p, &b), build(&p, &c));
        prop_assert!(((&a * &b) * &c).max_deviation(&(&a * &(&b * &c))) < TOL);
    }

    #[test]
    fn distributive(a in terms(), b in terms(), c in terms()) {
        let (p, _) = pool();
        let (a, b, c) = (build(&p, &a), build(&p, &b), build(&p, &c));
        let lhs = &a * &(&b + &c);
        let rhs = &a * &b + &a * &c;
        prop_assert!(lhs.max_deviation(&rhs) < TOL);
    }

    #[test]
    fn graded_commutative(a in terms(), b in terms(), pa in 0u32..2, pb in 0u32..2) {
        let (p, _) = pool();
        let (x, y) = (homogeneous(&p, &a, pa), homogeneous(&p, &b, pb));
        let sign = if pa * pb == 1 { -1.0 } else { 1.0 };
        prop_assert!((&x * &y).max_deviation(&(&y * &x).scale_re(sign)) < TOL);
    }

    #[test]
    fn odd_elements_square_to_zero(a in terms()) {
        let (p, _) = pool();
        let x = homogeneous(&p, &a, 1);
        prop_assert!((&x * &x).max_norm() < TOL);
    }

    #[test]
    fn derivatives_anticommute(a in terms(), i in 0usize..6, j in 0usize..6) {
        let (p, g) = pool();
        let x = build(&p, &a);
        let ij = x.left_derivative(g[j]).left_derivative(g[i]);
        let ji = x.left_derivative(g[i]).left_derivative(g[j]);
        prop_assert!((&ij + &ji).max_norm() < TOL);
    }

    #[test]
    fn graded_leibniz(a in terms(), b in terms(), pa in 0u32..2, i in 0usize..6) {
        let (p, g) = pool();
        let x = homogeneous(&p, &a, pa);
        let y = build(&p, &b);
        let sign = if pa == 1 { -1.0 } else { 1.0 };
        let lhs = (&x * &y).left_derivative(g[i]);
        let rhs = &x.left_derivative(g[i]) * &y + (&x * &y.left_derivative(g[i])).scale_re(sign);
        prop_assert!(lhs.max_deviation(&rhs) < TOL);
    }

    #[test]
    fn fubini_sign(a in terms(), i in 0usize..6, j in 0usize..6) {
        prop_assume!(i != j);
        let (p, g) = pool();
        let x = build(&p, &a);
        let ij = x.berezin(&[g[i], g[j]]);
        let ji = x.berezin(&[g[j], g[i]]);
        prop_assert!((&ij + &ji).max_norm() < TOL);
    }

    #[test]
    fn involution_reverses_products(a in terms(), b in terms()) {
        let (p, _) = pool();
        let (x, y) = (build(&p, &a), build(&p, &b));
        let lhs = p.involution(&(&x * &y)).unwrap();
        let rhs = p.involution(&y).unwrap() * p.involution(&x).unwrap();
        prop_assert!(lhs.max_deviation(&rhs) < TOL);
        let back = p.involution(&p.involution(&x).unwrap()).unwrap();
        prop_assert!(back.max_deviation(&x) < TOL);
    }

    #[test]
    fn exp_of_sum(a in terms(), b in terms()) {
        let (p, _) = pool();
        let (x, y) = (build(&p, &a).scale_re(0.3), build(&p, &b).scale_re(0.3));
        let (xo, yo) = (x.odd_part(), y.odd_part());
        let lhs = x.exp() * y.exp();
        let rhs = (&x + &y + &xo * &yo).exp();
        prop_assert!(lhs.max_deviation(&rhs) < 1e-9);
    }

    #[test]
    fn ln_inverts_exp(a in terms(), c in 0.5..2.0f64) {
        let (p, _) = pool();
        let x = build(&p, &a).scale_re(0.3) + p.scalar(Complex64::new(c, 0.0));
        let back = x.ln().unwrap().exp();
        prop_assert!(back.max_deviation(&x) < 1e-9);
    }
}

#[test]
fn gaussian_normalization() {
    let (p, g) = pool();
    let (gamma, gamma_star) = (g[0], g[1]);
    let x = (p.gen(gamma_star) * p.gen(gamma)).scale_re(-1.0).exp();
    let v = x.berezin(&[gamma_star, gamma]);
    assert!(v.max_deviation(&p.one()) < 1e-15);
}
