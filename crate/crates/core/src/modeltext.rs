//! Line-oriented text format for models: a header `poset n`, cover edges
//! `le i j` (meaning `i <= j`), and label lines `label i x y` (variables
//! holding at point `i`) or `label2 i 0|1` (a TWO-valued label). Points are
//! 0-based and the root must be point 0.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::evaluation::{EvalError, Evaluation};
use crate::poset::{LabelPoset, PosetError, RootedPoset};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelTextError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("missing `poset n` header")]
    MissingHeader,
    #[error("root must be point 0")]
    RootNotZero,
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Parsed model file: the poset plus whatever labels were present.
#[derive(Debug, Clone)]
pub struct ModelText {
    pub poset: RootedPoset,
    /// For each variable, the set of points where it holds.
    pub var_labels: BTreeMap<String, u128>,
    /// Points labeled 1 over TWO, if `label2` lines were present.
    pub two_labels: Option<u128>,
}

impl ModelText {
    /// Build the Kripke evaluation over the powerset of the declared
    /// variables (sorted by name).
    pub fn to_kripke(&self) -> Result<Evaluation, ModelTextError> {
        let vars: Vec<String> = self.var_labels.keys().cloned().collect();
        let masks: Vec<u128> = self.var_labels.values().copied().collect();
        Ok(Evaluation::kripke(
            Arc::new(self.poset.clone()),
            &vars,
            &masks,
        )?)
    }

    /// Build the TWO-valued evaluation, if `label2` lines were present.
    pub fn to_two(&self) -> Result<Option<Evaluation>, ModelTextError> {
        let Some(ones) = self.two_labels else {
            return Ok(None);
        };
        let map: Vec<usize> = self
            .poset
            .points()
            .map(|p| if ones & (1 << p) != 0 { 1 } else { 0 })
            .collect();
        Ok(Some(Evaluation::new(
            Arc::new(self.poset.clone()),
            Arc::new(LabelPoset::two()),
            map,
        )?))
    }
}

pub fn parse_model(text: &str) -> Result<ModelText, ModelTextError> {
    let mut n: Option<usize> = None;
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut var_labels: BTreeMap<String, u128> = BTreeMap::new();
    let mut two_labels: Option<u128> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        let rest: Vec<&str> = words.collect();
        let parse_point = |s: &str| -> Result<usize, ModelTextError> {
            s.parse()
                .map_err(|_| ModelTextError::Syntax(ln + 1, format!("bad point `{}`", s)))
        };
        match head {
            "poset" => {
                if rest.len() != 1 {
                    return Err(ModelTextError::Syntax(ln + 1, "poset needs a size".into()));
                }
                n = Some(parse_point(rest[0])?);
            }
            "le" => {
                if rest.len() != 2 {
                    return Err(ModelTextError::Syntax(ln + 1, "le needs two points".into()));
                }
                covers.push((parse_point(rest[0])?, parse_point(rest[1])?));
            }
            "label" => {
                if rest.is_empty() {
                    return Err(ModelTextError::Syntax(ln + 1, "label needs a point".into()));
                }
                let p = parse_point(rest[0])?;
                for v in &rest[1..] {
                    *var_labels.entry(v.to_string()).or_insert(0) |= 1 << p;
                }
            }
            "label2" => {
                if rest.len() != 2 {
                    return Err(ModelTextError::Syntax(
                        ln + 1,
                        "label2 needs a point and 0|1".into(),
                    ));
                }
                let p = parse_point(rest[0])?;
                let bit = two_labels.get_or_insert(0);
                match rest[1] {
                    "1" => *bit |= 1 << p,
                    "0" => {}
                    other => {
                        return Err(ModelTextError::Syntax(
                            ln + 1,
                            format!("label2 value must be 0 or 1, got `{}`", other),
                        ))
                    }
                }
            }
            other => {
                return Err(ModelTextError::Syntax(
                    ln + 1,
                    format!("unknown directive `{}`", other),
                ));
            }
        }
    }
    let n = n.ok_or(ModelTextError::MissingHeader)?;
    let poset = RootedPoset::from_covers(n, &covers)?;
    if poset.root() != 0 {
        return Err(ModelTextError::RootNotZero);
    }
    Ok(ModelText {
        poset,
        var_labels,
        two_labels,
    })
}

/// Renumbering that puts the root at 0 (height descending, then stable).
fn canonical_order(poset: &RootedPoset) -> Vec<usize> {
    let mut order: Vec<usize> = poset.points().collect();
    order.sort_by_key(|&p| (std::cmp::Reverse(poset.height_of(p)), p));
    order
}

/// Serialize a Kripke evaluation (powerset labels) in the model text format.
pub fn serialize_kripke(eval: &Evaluation) -> String {
    let poset = eval.poset();
    let vars = eval
        .labels()
        .powerset_vars()
        .expect("serialize_kripke needs powerset labels")
        .to_vec();
    let order = canonical_order(poset);
    let mut new_of_old = vec![0usize; poset.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of_old[old] = new;
    }
    let mut out = format!("poset {}\n", poset.len());
    let mut covers = poset.covers();
    covers.sort_by_key(|&(lo, hi)| (new_of_old[lo], new_of_old[hi]));
    for (lo, hi) in covers {
        out.push_str(&format!("le {} {}\n", new_of_old[lo], new_of_old[hi]));
    }
    for &old in &order {
        let label = eval.label_of(old);
        let held: Vec<&str> = vars
            .iter()
            .enumerate()
            .filter(|(i, _)| label & (1 << i) != 0)
            .map(|(_, v)| v.as_str())
            .collect();
        if !held.is_empty() {
            out.push_str(&format!("label {} {}\n", new_of_old[old], held.join(" ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::random_kripke;
    use rand::SeedableRng;

    #[test]
    fn parse_basic_model() {
        let text = "poset 2\nle 1 0\nlabel 1 x\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m.poset.len(), 2);
        assert_eq!(m.poset.root(), 0);
        assert_eq!(m.var_labels["x"], 0b10);
        let k = m.to_kripke().unwrap();
        assert!(k.forces(&crate::formula::parse("x").unwrap(), 1).unwrap());
        assert!(!k.forces_root(&crate::formula::parse("x").unwrap()).unwrap());
    }

    #[test]
    fn rejects_bad_models() {
        assert!(matches!(
            parse_model("le 0 1\n"),
            Err(ModelTextError::MissingHeader)
        ));
        // root is not point 0
        assert!(matches!(
            parse_model("poset 2\nle 0 1\n"),
            Err(ModelTextError::RootNotZero)
        ));
        assert!(matches!(
            parse_model("poset 2\nle 1 0\nwat\n"),
            Err(ModelTextError::Syntax(3, _))
        ));
    }

    #[test]
    fn serialize_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let vars = vec!["x".to_string(), "y".to_string()];
        let store = crate::evaluation::TypeStore::new();
        for _ in 0..30 {
            let n = rand::Rng::random_range(&mut rng, 1..=6);
            let p = std::sync::Arc::new(crate::poset::RootedPoset::random(&mut rng, n));
            let e = random_kripke(&mut rng, p, &vars);
            let text = serialize_kripke(&e);
            let parsed = parse_model(&text).unwrap();
            // the round trip relabels points, so compare up to bisimulation
            // at a depth exceeding the poset size, plus size equality
            assert_eq!(parsed.poset.len(), e.poset().len());
            let mut k = parsed.to_kripke().unwrap();
            // align variable sets: to_kripke uses only declared labels; a
            // model where some variable holds nowhere loses that variable,
            // re-add by rebuilding with the full list
            if parsed.var_labels.len() != vars.len() {
                let masks: Vec<u128> = vars
                    .iter()
                    .map(|v| parsed.var_labels.get(v).copied().unwrap_or(0))
                    .collect();
                k = Evaluation::kripke(Arc::new(parsed.poset.clone()), &vars, &masks).unwrap();
            }
            for depth in 0..=(n as u32) {
                assert!(crate::evaluation::equiv_n(&store, &e, &k, depth));
            }
        }
    }
}
