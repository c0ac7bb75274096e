//! Formula generators for tests and benchmarks.

use rand::seq::index::sample;
use rand::Rng;

use crate::dimacs::RawFormula;
use crate::lit::{Lit, Var};

/// Uniform random k-CNF: each clause picks `k` distinct variables and random signs.
pub fn random_kcnf(
    rng: &mut impl Rng,
    num_vars: usize,
    num_clauses: usize,
    k: usize,
) -> RawFormula {
    assert!(k <= num_vars, "clause width exceeds the variable count");
    let clauses = (0..num_clauses)
        .map(|_| {
            sample(rng, num_vars, k)
                .into_iter()
                .map(|v| Lit::new(Var::from_index(v), rng.gen()))
                .collect()
        })
        .collect();
    RawFormula::new(num_vars, clauses)
}

/// Pigeonhole formula: `pigeons` pigeons into `holes` holes, each pigeon somewhere and no
/// two pigeons sharing a hole. Unsatisfiable when `pigeons > holes`.
pub fn pigeonhole(pigeons: usize, holes: usize) -> RawFormula {
    let var = |p: usize, h: usize| Var::from_index(p * holes + h);
    let mut clauses: Vec<Vec<Lit>> = (0..pigeons)
        .map(|p| (0..holes).map(|h| Lit::positive(var(p, h))).collect())
        .collect();
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                clauses.push(vec![Lit::negative(var(p, h)), Lit::negative(var(q, h))]);
            }
        }
    }
    RawFormula::new(pigeons * holes, clauses)
}

/// Conjunction of two formulas over disjoint variables; the variables of `b` are shifted
/// past those of `a`.
pub fn disjoint_union(a: &RawFormula, b: &RawFormula) -> RawFormula {
    let shift = a.num_vars;
    let mut clauses = a.clauses.clone();
    clauses.extend(b.clauses.iter().map(|c| {
        c.iter()
            .map(|l| Lit::new(Var::from_index(l.var().index() + shift), l.is_positive()))
            .collect()
    }));
    RawFormula::new(a.num_vars + b.num_vars, clauses)
}
