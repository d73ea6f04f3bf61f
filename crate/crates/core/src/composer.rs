//! Composite gates: serial composition, plugging a gate into an input, whole
//! circuit trees, and the same trees as composed differential operators.
//!
//! The matrix side embeds a plugged gate by a plain tensor product on the
//! index bits, with no parity-string signs. The symbol side reaches the same
//! operator through one Berezin integration, moving the odd part of the
//! plugged symbol across the trailing inputs of the host by `β → -β`.

use std::fmt;

use crate::error::{Error, Result};
use crate::fb::{FbForm, FbOperator};
use crate::fock::FockOperator;
use crate::gates::{lookup, make_gate, Gate};
use crate::grassmann::{GenId, GeneratorPool, Grassmann, Mask};
use crate::symbols::{
    compose_matrix_symbols, convolve, Slots, SymbolExpr, SymbolKind,
};

/// Tolerance for the matrix/symbol cross-check of every composite.
pub const COHERENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Child {
    /// Input wire `wK`, 1-based.
    Wire(usize),
    Node(CircuitNode),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitNode {
    pub gate: String,
    pub param: Option<f64>,
    pub children: Vec<Child>,
}

impl CircuitNode {
    pub fn new(gate: impl Into<String>, param: Option<f64>, children: Vec<Child>) -> Self {
        CircuitNode {
            gate: gate.into(),
            param,
            children,
        }
    }

    /// Gate applied to `w1..wN`.
    pub fn single(gate: &str, param: Option<f64>) -> Result<Self> {
        let spec = lookup(gate).ok_or_else(|| Error::UnknownGate(gate.into()))?;
        Ok(Self::new(gate, param, (1..=spec.n_in).map(Child::Wire).collect()))
    }

    /// The same tree with every wire index raised by `by`.
    pub fn shifted(mut self, by: usize) -> Self {
        for c in &mut self.children {
            *c = match std::mem::replace(c, Child::Wire(0)) {
                Child::Wire(w) => Child::Wire(w + by),
                Child::Node(n) => Child::Node(n.shifted(by)),
            };
        }
        self
    }

    /// Wire indices in left-to-right order.
    pub fn wires(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for c in &self.children {
            match c {
                Child::Wire(w) => out.push(*w),
                Child::Node(n) => out.extend(n.wires()),
            }
        }
        out
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|c| match c {
                Child::Wire(_) => 0,
                Child::Node(n) => n.depth(),
            })
            .max()
            .unwrap_or(0)
    }

    /// Arity checks and the wire-order restriction: the leaves must read
    /// `w1, w2, ..., wN` from left to right.
    pub fn check(&self) -> Result<()> {
        self.check_arity()?;
        let wires = self.wires();
        if wires.iter().enumerate().any(|(i, &w)| w != i + 1) {
            return Err(Error::Topology(format!(
                "wires must appear as w1..w{} in order, found {}",
                wires.len(),
                wires.iter().map(|w| format!("w{w}")).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(())
    }

    fn check_arity(&self) -> Result<()> {
        let spec = lookup(&self.gate).ok_or_else(|| Error::UnknownGate(self.gate.clone()))?;
        if spec.n_in != self.children.len() {
            return Err(Error::Arity(format!(
                "{} takes {} inputs, got {}",
                self.gate,
                spec.n_in,
                self.children.len()
            )));
        }
        for c in &self.children {
            if let Child::Node(n) = c {
                n.check_arity()?;
                let out = lookup(&n.gate).expect("checked").n_out;
                if out != 1 {
                    return Err(Error::Topology(format!(
                        "{} has {out} outputs and cannot feed a single input",
                        n.gate
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for CircuitNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gate)?;
        if let Some(p) = self.param {
            write!(f, "[{p}]")?;
        }
        write!(f, "(")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match c {
                Child::Wire(w) => write!(f, "w{w}")?,
                Child::Node(n) => write!(f, "{n}")?,
            }
        }
        write!(f, ")")
    }
}

fn coherent(name: String, matrix: FockOperator, symbol: SymbolExpr) -> Result<Gate> {
    let gate = Gate::assemble(name, None, matrix, symbol);
    let oracle = crate::symbols::matrix_symbol(&gate.matrix);
    let dev = gate.matrix_symbol().max_deviation(&oracle);
    if dev > COHERENCE_TOL {
        return Err(Error::Inconsistent(format!(
            "{}: symbol and matrix differ by {dev:e}",
            gate.name
        )));
    }
    Ok(gate)
}

/// `A B`: matrix product and symbol composition.
pub fn serial(a: &Gate, b: &Gate) -> Result<Gate> {
    let matrix = a.matrix.compose(&b.matrix)?;
    let symbol = if a.is_square() && b.is_square() {
        convolve(&a.symbol, &b.symbol)?
    } else {
        compose_matrix_symbols(&a.symbol, &b.symbol)?
    };
    coherent(format!("{}·{}", a.label(), b.label()), matrix, symbol)
}

/// `1 ⊗ B ⊗ 1` on the index bits, with `B` occupying host input `k`.
pub fn embed(b: &FockOperator, k: usize, host_inputs: usize) -> FockOperator {
    assert!(b.n_out == 1 && (1..=host_inputs).contains(&k));
    let n_in = host_inputs - 1 + b.n_in;
    let low_mask = (1usize << (k - 1)) - 1;
    let mid_mask = (1usize << b.n_in) - 1;
    FockOperator::from_action(n_in, host_inputs, |m| {
        let low = m & low_mask;
        let mid = (m >> (k - 1)) & mid_mask;
        let high = m >> (k - 1 + b.n_in);
        (0..2)
            .map(|o| (low | o << (k - 1) | high << k, b.entries[(o, mid)]))
            .filter(|(_, c)| c.norm() > 0.0)
            .collect()
    })
}

/// Matrix symbol of `A` with its `k`-th input fed by `B`:
/// `∫ (A(α*; β', γ, β''') B^e(γ*; β'') + A(α*; β', γ, -β''') B^o(γ*; β''))
/// exp(-γ*γ) dγ* dγ`.
pub fn plug_symbol(a: &SymbolExpr, k: usize, b: &SymbolExpr) -> Result<SymbolExpr> {
    if !(1..=a.n_in).contains(&k) || b.n_out != 1 {
        return Err(Error::Arity(format!(
            "cannot plug a {}-output gate into input {k} of {} inputs",
            b.n_out, a.n_in
        )));
    }
    let (a, b) = (a.to_matrix_symbol(), b.to_matrix_symbol());
    let n_in = a.n_in - 1 + b.n_in;
    let mut pool = GeneratorPool::new();
    let slots = Slots::alloc(&mut pool, a.n_out, n_in, "α", "β")?;
    let (g, gs) = pool.alloc_pair("γ", "γ*")?;
    let be = &slots.inp;
    let (lead, rest) = be.split_at(k - 1);
    let (mid, trail) = rest.split_at(b.n_in);
    let host_in: Vec<GenId> = lead.iter().copied().chain([g]).chain(trail.iter().copied()).collect();
    let av = a.import(&pool, &slots.out, &host_in);
    let (b_even, b_odd) = b.import(&pool, &[gs], mid).parity_split();
    let trail_mask: Mask = trail.iter().fold(0, |m, t| m | t.bit());
    let x = &av * &b_even + &av.flip_sign(trail_mask) * &b_odd;
    let measure = (-(pool.gen(gs) * pool.gen(g))).exp();
    let x = (x * measure).berezin(&[gs, g]);
    Ok(SymbolExpr::export(SymbolKind::Matrix, &x, &pool, &slots.out, be))
}

/// Gate `A` with input `k` (1-based) replaced by the output of `B`.
pub fn plug_input(a: &Gate, k: usize, b: &Gate) -> Result<Gate> {
    let symbol = plug_symbol(&a.symbol, k, &b.symbol)?;
    let matrix = a.matrix.compose(&embed(&b.matrix, k, a.n_in))?;
    coherent(format!("{}<{k}:{}>", a.label(), b.label()), matrix, symbol)
}

/// Folds a circuit tree into one gate, plugging children from the last
/// input to the first so that earlier input positions stay fixed.
pub fn build_circuit(node: &CircuitNode) -> Result<Gate> {
    node.check()?;
    build_unchecked(node).map(|mut g| {
        g.name = node.to_string();
        g
    })
}

fn build_unchecked(node: &CircuitNode) -> Result<Gate> {
    let mut gate = make_gate(&node.gate, node.param)?;
    for (i, c) in node.children.iter().enumerate().rev() {
        if let Child::Node(n) = c {
            let sub = build_unchecked(n)?;
            gate = plug_input(&gate, i + 1, &sub)?;
        }
    }
    Ok(gate)
}

#[derive(Debug, Clone)]
enum FbNode {
    Wire,
    Op {
        op: FbOperator,
        children: Vec<FbNode>,
    },
}

/// A circuit as nested differential operators acting on state symbols.
#[derive(Debug, Clone)]
pub struct ComposedFb {
    pub n_in: usize,
    pub n_out: usize,
    root: FbNode,
}

/// Circuit tree to composed Fock-Bargmann operator.
pub fn fb_compose(node: &CircuitNode) -> Result<ComposedFb> {
    node.check()?;
    fn go(node: &CircuitNode) -> Result<FbNode> {
        let op = make_gate(&node.gate, node.param)?.fb;
        let children = node
            .children
            .iter()
            .map(|c| match c {
                Child::Wire(_) => Ok(FbNode::Wire),
                Child::Node(n) => go(n),
            })
            .collect::<Result<_>>()?;
        Ok(FbNode::Op { op, children })
    }
    let root = go(node)?;
    let n_out = lookup(&node.gate).expect("checked").n_out;
    Ok(ComposedFb {
        n_in: node.wires().len(),
        n_out,
        root,
    })
}

impl ComposedFb {
    /// The operator itself when the circuit is a single gate on plain wires.
    pub fn single_operator(&self) -> Option<&FbOperator> {
        match &self.root {
            FbNode::Op { op, children } if children.iter().all(|c| matches!(c, FbNode::Wire)) => {
                Some(op)
            }
            _ => None,
        }
    }

    /// Acts on a state symbol; inner gates act first.
    pub fn apply(&self, f: &SymbolExpr) -> Result<SymbolExpr> {
        if f.kind != SymbolKind::State || f.n_out != self.n_in {
            return Err(Error::Arity(format!(
                "circuit on {} cells applied to a {}-cell {:?} symbol",
                self.n_in, f.n_out, f.kind
            )));
        }
        let mut pool = f.pool().clone();
        let mut reg = f.slots().out.clone();
        let mut x = f.value.clone();
        eval(&self.root, &mut pool, &mut x, &mut reg, 0)?;
        let x = x.transplant(pool.id(), |g| g);
        Ok(SymbolExpr::export(SymbolKind::State, &x, &pool, &reg, &[]))
    }
}

/// Evaluates `node` on the register slots starting at `start`; returns the
/// number of slots it leaves behind.
fn eval(
    node: &FbNode,
    pool: &mut GeneratorPool,
    x: &mut Grassmann,
    reg: &mut Vec<GenId>,
    start: usize,
) -> Result<usize> {
    let FbNode::Op { op, children } = node else {
        return Ok(1);
    };
    let mut pos = start;
    for c in children {
        pos += eval(c, pool, x, reg, pos)?;
    }
    let inp: Vec<GenId> = reg[start..start + op.n_in].to_vec();
    let high: Mask = reg[start + op.n_in..].iter().fold(0, |m, g| m | g.bit());
    let out = match op.form {
        FbForm::Normal => inp.clone(),
        FbForm::Projected => {
            let base = pool.len();
            (0..op.n_out)
                .map(|k| pool.alloc(format!("y{}*", base + k)))
                .collect::<Result<_>>()?
        }
    };
    let y = x.transplant(pool.id(), |g| g);
    *x = op.act(pool, &y, &inp, &out, high);
    reg.splice(start..start + op.n_in, out);
    Ok(op.n_out)
}
