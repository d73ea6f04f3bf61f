//! Gate library: each gate with its matrix, symbol, Fock-Bargmann form and,
//! where one exists, its exponential generator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fb::{to_fb_operator, FbOperator};
use crate::fock::{self, FockOperator};
use crate::grassmann::{GenId, GeneratorPool, Grassmann};
use crate::symbols::{covariant_symbol, matrix_symbol, SymbolExpr, SymbolKind};

/// Registry entry: name, arity and whether the gate takes an angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateSpec {
    pub name: &'static str,
    pub n_in: usize,
    pub n_out: usize,
    pub takes_param: bool,
}

pub const REGISTRY: &[GateSpec] = &[
    GateSpec { name: "id", n_in: 1, n_out: 1, takes_param: false },
    GateSpec { name: "not", n_in: 1, n_out: 1, takes_param: false },
    GateSpec { name: "and", n_in: 2, n_out: 1, takes_param: false },
    GateSpec { name: "or", n_in: 2, n_out: 1, takes_param: false },
    GateSpec { name: "xor", n_in: 2, n_out: 1, takes_param: false },
    GateSpec { name: "nand", n_in: 2, n_out: 1, takes_param: false },
    GateSpec { name: "cc_not", n_in: 3, n_out: 3, takes_param: false },
    GateSpec { name: "j", n_in: 3, n_out: 3, takes_param: false },
    GateSpec { name: "deutsch", n_in: 3, n_out: 3, takes_param: true },
    GateSpec { name: "deutsch_prime", n_in: 3, n_out: 3, takes_param: true },
];

pub fn lookup(name: &str) -> Option<&'static GateSpec> {
    REGISTRY.iter().find(|s| s.name == name)
}

#[derive(Debug, Clone)]
pub struct Gate {
    pub name: String,
    pub param: Option<f64>,
    pub n_in: usize,
    pub n_out: usize,
    pub matrix: FockOperator,
    /// Covariant symbol for square gates, matrix symbol otherwise.
    pub symbol: SymbolExpr,
    pub fb: FbOperator,
    /// `H` with `exp(H)` equal to the covariant symbol.
    pub exp_generator: Option<SymbolExpr>,
}

impl Gate {
    /// Derives every representation from the matrix.
    pub fn from_matrix(name: impl Into<String>, param: Option<f64>, matrix: FockOperator) -> Gate {
        let symbol = if matrix.is_square() {
            covariant_symbol(&matrix).expect("square")
        } else {
            matrix_symbol(&matrix)
        };
        Gate::assemble(name, param, matrix, symbol)
    }

    /// Bundles a matrix with a symbol obtained by other means. Square gates
    /// store the covariant form of `symbol`.
    pub fn assemble(
        name: impl Into<String>,
        param: Option<f64>,
        matrix: FockOperator,
        symbol: SymbolExpr,
    ) -> Gate {
        let symbol = if matrix.is_square() && symbol.kind == SymbolKind::Matrix {
            symbol.to_covariant_symbol().expect("square")
        } else {
            symbol
        };
        let exp_generator = if matrix.is_square() {
            symbol
                .value
                .ln()
                .ok()
                .map(|h| symbol.clone().with_value(|_, _| h))
        } else {
            None
        };
        Gate {
            name: name.into(),
            param,
            n_in: matrix.n_in,
            n_out: matrix.n_out,
            fb: to_fb_operator(&matrix),
            symbol,
            exp_generator,
            matrix,
        }
    }

    pub fn is_square(&self) -> bool {
        self.n_in == self.n_out
    }

    /// `name` or `name[φ]`.
    pub fn label(&self) -> String {
        match self.param {
            Some(p) => format!("{}[{}]", self.name, p),
            None => self.name.clone(),
        }
    }

    pub fn matrix_symbol(&self) -> SymbolExpr {
        self.symbol.to_matrix_symbol()
    }

    /// The exponential generator, or an error naming the gate.
    pub fn generator(&self) -> Result<&SymbolExpr> {
        self.exp_generator
            .as_ref()
            .ok_or_else(|| Error::NoExponentialForm(self.label()))
    }
}

pub fn gate_matrix(name: &str, param: Option<f64>) -> Result<FockOperator> {
    let spec = lookup(name).ok_or_else(|| Error::UnknownGate(name.into()))?;
    let phi = match (spec.takes_param, param) {
        (true, Some(p)) => p,
        (true, None) => return Err(Error::MissingParameter(name.into())),
        (false, Some(_)) => return Err(Error::UnexpectedParameter(name.into())),
        (false, None) => 0.0,
    };
    Ok(match name {
        "id" => FockOperator::identity(1),
        "not" => fock::not_matrix(),
        "and" => fock::and_matrix(),
        "or" => fock::or_matrix(),
        "xor" => fock::xor_matrix(),
        "nand" => fock::nand_matrix(),
        "cc_not" => fock::cc_not_matrix(),
        "j" => fock::j_matrix(),
        "deutsch" => fock::deutsch_matrix(phi),
        "deutsch_prime" => fock::deutsch_prime_matrix(phi),
        _ => unreachable!("registry and constructors agree"),
    })
}

pub fn make_gate(name: &str, param: Option<f64>) -> Result<Gate> {
    let matrix = gate_matrix(name, param)?;
    Ok(Gate::from_matrix(name, param, matrix))
}

pub fn deutsch_prime(phi: f64) -> Gate {
    make_gate("deutsch_prime", Some(phi)).expect("registered")
}

/// Symbols of the gates in the closed forms usually quoted for them:
///
/// - not: `α* + β`
/// - and: `1 + β1 + β2 + α*β1β2`
/// - or: `1 + α*(β1 + β2 + β1β2)`
/// - cc_not: `1 + α3*α2*(α1* - 1)(1 - β1)β2β3`
/// - deutsch: `1 + H(φ)`, see [`closed_form_deutsch_generator`]
///
/// The not, and, or forms are exact. For cc_not and deutsch the form equals
/// `1 + <α*|G - 1|β>`, which differs from the covariant symbol by the
/// `α1*β1` cross term.
pub fn closed_form_symbol(name: &str, param: Option<f64>) -> Result<SymbolExpr> {
    let sym = |kind, n_out, n_in, f: &dyn Fn(&GeneratorPool, &[GenId], &[GenId]) -> Grassmann| {
        SymbolExpr::blank(kind, n_out, n_in).with_value(|p, s| f(p, &s.out, &s.inp))
    };
    match name {
        "not" => Ok(sym(SymbolKind::Covariant, 1, 1, &|p, a, b| p.gen(a[0]) + p.gen(b[0]))),
        "and" => Ok(sym(SymbolKind::Matrix, 1, 2, &|p, a, b| {
            p.one() + p.gen(b[0]) + p.gen(b[1]) + p.product(&[a[0], b[0], b[1]])
        })),
        "or" => Ok(sym(SymbolKind::Matrix, 1, 2, &|p, a, b| {
            let inner = p.gen(b[0]) + p.gen(b[1]) + p.product(&[b[0], b[1]]);
            p.one() + p.gen(a[0]) * inner
        })),
        "cc_not" => Ok(sym(SymbolKind::Covariant, 3, 3, &|p, a, b| {
            let left = p.product(&[a[2], a[1]]) * (p.gen(a[0]) - p.one());
            let right = (p.one() - p.gen(b[0])) * p.product(&[b[1], b[2]]);
            p.one() + left * right
        })),
        "deutsch" => {
            let phi = param.ok_or_else(|| Error::MissingParameter(name.into()))?;
            let h = closed_form_deutsch_generator(phi);
            Ok(h.clone().with_value(|p, _| p.one() + &h.value))
        }
        _ => Err(Error::UnknownGate(name.into())),
    }
}

/// `H(φ) = α3*α2*((i cos φ - 1)(1 + α1*β1) + sin φ (α1* + β1))β2β3`.
pub fn closed_form_deutsch_generator(phi: f64) -> SymbolExpr {
    SymbolExpr::blank(SymbolKind::Covariant, 3, 3).with_value(|p, s| {
        let (a, b) = (&s.out, &s.inp);
        let even = (p.one() + p.product(&[a[0], b[0]])).scale(Complex64::new(-1.0, phi.cos()));
        let odd = (p.gen(a[0]) + p.gen(b[0])).scale_re(phi.sin());
        p.product(&[a[2], a[1]]) * (even + odd) * p.product(&[b[1], b[2]])
    })
}

/// Closed Fock-Bargmann forms: `α* + ∂/∂α*` for not and
/// `1 + α3*α2*(α1* - 1)(1 - ∂/∂α1*)∂/∂α2*∂/∂α3*` for cc_not.
pub fn closed_form_fb(name: &str) -> Result<FbOperator> {
    let mut pool = GeneratorPool::new();
    let n = lookup(name).ok_or_else(|| Error::UnknownGate(name.into()))?.n_in;
    let a: Vec<GenId> = (1..=n)
        .map(|k| pool.alloc(format!("α{k}*")))
        .collect::<Result<_>>()?;
    let d: Vec<GenId> = (1..=n)
        .map(|k| pool.alloc(format!("∂{k}")))
        .collect::<Result<_>>()?;
    let p = &pool;
    let x = match name {
        "not" => p.gen(a[0]) + p.gen(d[0]),
        "cc_not" => {
            let left = p.product(&[a[2], a[1]]) * (p.gen(a[0]) - p.one());
            let right = (p.one() - p.gen(d[0])) * p.product(&[d[1], d[2]]);
            p.one() + left * right
        }
        _ => return Err(Error::UnknownGate(format!("no closed FB form for {name}"))),
    };
    Ok(FbOperator::from_grassmann(n, &x, &a, &d))
}

/// Sample of the claim that `D'(φ)` maps basis states to basis states only
/// when it is the identity: `(φ, classical, identity)` for `φ = kπ/8`.
pub fn b_logic_scan() -> Vec<(f64, bool, bool)> {
    (0..16)
        .map(|k| {
            let phi = k as f64 * PI / 8.0;
            let m = fock::deutsch_prime_matrix(phi);
            let identity = m.max_deviation(&FockOperator::identity(3)) < 1e-12;
            (phi, m.is_classical(1e-12), identity)
        })
        .collect()
}
