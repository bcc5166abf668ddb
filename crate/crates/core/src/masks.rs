//! Compiled mask evaluation: a formula DAG is flattened once into postorder
//! ops over variable indices, then forcing masks are computed per model with
//! plain word operations. Shared by the countermodel search and the
//! index-candidate filter, which evaluate one formula on many models.

use rustc_hash::FxHashMap;

use crate::formula::{Formula, Kind};
use crate::poset::RootedPoset;

pub(crate) enum MOp {
    Bottom,
    Var(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
}

pub(crate) struct Compiled {
    pub ops: Vec<MOp>,
    pub top: usize,
}

/// Flatten `f` into postorder ops; variables are resolved to indices in
/// `vars` (panics on unknown variables, callers validate).
pub(crate) fn compile(f: &Formula, vars: &[String]) -> Compiled {
    let mut ops = Vec::new();
    let mut slot: FxHashMap<usize, usize> = FxHashMap::default();
    fn rec(
        f: &Formula,
        vars: &[String],
        ops: &mut Vec<MOp>,
        slot: &mut FxHashMap<usize, usize>,
    ) -> usize {
        if let Some(&s) = slot.get(&f.ptr_id()) {
            return s;
        }
        let op = match f.kind() {
            Kind::Bottom => MOp::Bottom,
            Kind::Var(n) => MOp::Var(
                vars.iter()
                    .position(|v| v == &**n)
                    .unwrap_or_else(|| panic!("unknown variable {}", n)),
            ),
            Kind::And(a, b) => {
                let (x, y) = (rec(a, vars, ops, slot), rec(b, vars, ops, slot));
                MOp::And(x, y)
            }
            Kind::Or(a, b) => {
                let (x, y) = (rec(a, vars, ops, slot), rec(b, vars, ops, slot));
                MOp::Or(x, y)
            }
            Kind::Implies(a, b) => {
                let (x, y) = (rec(a, vars, ops, slot), rec(b, vars, ops, slot));
                MOp::Implies(x, y)
            }
        };
        ops.push(op);
        let s = ops.len() - 1;
        slot.insert(f.ptr_id(), s);
        s
    }
    let top = rec(f, vars, &mut ops, &mut slot);
    Compiled { ops, top }
}

impl Compiled {
    /// Forcing masks over explicit (downward closed) variable masks, writing
    /// into a scratch buffer sized to `self.ops`.
    pub fn eval(&self, poset: &RootedPoset, var_masks: &[u128], scratch: &mut Vec<u128>) -> u128 {
        scratch.clear();
        scratch.resize(self.ops.len(), 0);
        for (i, op) in self.ops.iter().enumerate() {
            scratch[i] = match *op {
                MOp::Bottom => 0,
                MOp::Var(j) => var_masks[j],
                MOp::And(x, y) => scratch[x] & scratch[y],
                MOp::Or(x, y) => scratch[x] | scratch[y],
                MOp::Implies(x, y) => {
                    let bad = scratch[x] & !scratch[y];
                    let mut m = 0u128;
                    for p in poset.points() {
                        if poset.below_mask(p) & bad == 0 {
                            m |= 1 << p;
                        }
                    }
                    m & poset.full_mask()
                }
            };
        }
        scratch[self.top]
    }
}
