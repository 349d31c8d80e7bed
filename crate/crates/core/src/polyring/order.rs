use super::Monomial;
use crate::error::{Error, Result};
use crate::exactalg::{clear_denominators, format_rational, Rational};
use num_traits::{ToPrimitive, Zero};
use std::cmp::Ordering;

/// A monomial order refined by weight vectors under the min convention:
/// a monomial of smaller weight is the larger one. Ties go to the next
/// weight vector and finally to graded reverse lexicographic order by
/// variable index (x1 > x2 > ... > xn).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightOrder {
    nvars: usize,
    weights: Vec<Vec<Rational>>,
    scaled: Vec<Vec<i64>>,
}

impl WeightOrder {
    pub fn grevlex(nvars: usize) -> Self {
        WeightOrder { nvars, weights: Vec::new(), scaled: Vec::new() }
    }

    pub fn weighted(w: Vec<Rational>) -> Self {
        let n = w.len();
        Self::refined(n, vec![w]).expect("single weight of matching length")
    }

    /// Lexicographic refinement by the given weights, then grevlex.
    pub fn refined(nvars: usize, weights: Vec<Vec<Rational>>) -> Result<Self> {
        let mut scaled = Vec::new();
        let mut kept = Vec::new();
        for w in weights {
            if w.len() != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "weight of length {} for {} variables",
                    w.len(),
                    nvars
                )));
            }
            if w.iter().all(|x| x.is_zero()) {
                continue;
            }
            let ints = clear_denominators(&w);
            let ints: Option<Vec<i64>> = ints.iter().map(|x| x.to_i64()).collect();
            let ints = ints.ok_or_else(|| Error::Invalid("weight entries too large".into()))?;
            scaled.push(ints);
            kept.push(w);
        }
        Ok(WeightOrder { nvars, weights: kept, scaled })
    }

    /// Order eliminating `vars`: any monomial involving them beats every monomial without.
    pub fn elimination(nvars: usize, vars: &[usize]) -> Self {
        let mut w = vec![Rational::zero(); nvars];
        for &v in vars {
            w[v] = -Rational::from_integer(1.into());
        }
        Self::refined(nvars, vec![w]).expect("length matches")
    }

    /// Same order with an integer grading placed in front (larger degree wins).
    pub fn with_grading(&self, grading: &[i64]) -> Self {
        let g: Vec<Rational> = grading.iter().map(|&x| Rational::from_integer((-x).into())).collect();
        let mut ws = vec![g];
        ws.extend(self.weights.iter().cloned());
        Self::refined(self.nvars, ws).expect("lengths match")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    /// True when every variable is larger than 1, i.e. the order is a well-order
    /// on the polynomial ring.
    pub fn is_well_order(&self) -> bool {
        (0..self.nvars).all(|i| match self.scaled.iter().map(|w| w[i]).find(|&x| x != 0) {
            Some(x) => x < 0,
            None => true,
        })
    }

    /// `Greater` when `a` is the larger monomial.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for w in &self.scaled {
            let (wa, wb) = (a.weight_i64(w), b.weight_i64(w));
            if wa != wb {
                return wb.cmp(&wa);
            }
        }
        grevlex_cmp(a, b)
    }

    /// Additive sort key: comparing keys lexicographically reproduces `cmp`.
    pub(crate) fn key(&self, m: &Monomial) -> Vec<i64> {
        let mut k = Vec::with_capacity(self.scaled.len() + 1 + self.nvars);
        for w in &self.scaled {
            k.push(-m.weight_i64(w));
        }
        k.push(m.degree());
        for &e in m.0.iter().rev() {
            k.push(-(e as i64));
        }
        k
    }

    pub fn describe(&self) -> String {
        let ws: Vec<String> = self
            .weights
            .iter()
            .map(|w| format!("[{}]", w.iter().map(format_rational).collect::<Vec<_>>().join(",")))
            .collect();
        if ws.is_empty() {
            "grevlex".to_string()
        } else {
            format!("min-weights {} then grevlex", ws.join(" "))
        }
    }
}

pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    let (da, db) = (a.degree(), b.degree());
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..a.0.len()).rev() {
        if a.0[i] != b.0[i] {
            return b.0[i].cmp(&a.0[i]);
        }
    }
    Ordering::Equal
}
