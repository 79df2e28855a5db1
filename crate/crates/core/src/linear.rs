//! Exact rational linear systems in the angle symbols.
//!
//! A system is a set of affine equations, open box bounds on every
//! variable, and disequality clauses. Equations are reduced by Gaussian
//! elimination to an affine parametrization `x = x0 + N t`; the open bounds
//! then become strict inequalities in `t`, decided by Fourier–Motzkin
//! elimination. A clause is a disjunction of affine forms that may not all
//! vanish; it is violated only when every form vanishes identically on the
//! solution space.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

/// `coeffs · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Equation {
    pub coeffs: Vec<Q>,
    pub rhs: Q,
}

impl Equation {
    pub fn new(coeffs: Vec<Q>, rhs: Q) -> Self {
        Equation { coeffs, rhs }
    }

    /// Same equation scaled so that the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Equation {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(&lead) => Equation {
                coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
                rhs: self.rhs / lead,
            },
            None => self.clone(),
        }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        dot(&self.coeffs, x) - self.rhs
    }
}

/// A disjunction: at least one of the equations must fail to hold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub tag: String,
    pub forms: Vec<Equation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub n_vars: usize,
    pub equations: Vec<Equation>,
    pub clauses: Vec<Clause>,
}

impl LinearSystem {
    pub fn new(n_vars: usize) -> Self {
        LinearSystem { n_vars, equations: Vec::new(), clauses: Vec::new() }
    }

    /// Adds an equation unless an identical normalized copy is present.
    pub fn push_equation(&mut self, eq: Equation) {
        assert_eq!(eq.coeffs.len(), self.n_vars);
        let eq = eq.normalized();
        if !self.equations.contains(&eq) {
            self.equations.push(eq);
        }
    }

    pub fn push_clause(&mut self, clause: Clause) {
        self.clauses.push(clause);
    }
}

/// Structured reasons for rejecting a system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectReason {
    InconsistentEquations,
    BoundsEmpty,
    ForcedEquality(String),
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::InconsistentEquations => write!(f, "inconsistent-equations"),
            RejectReason::BoundsEmpty => write!(f, "bounds-empty"),
            RejectReason::ForcedEquality(t) => write!(f, "forced:{t}"),
        }
    }
}

/// Result of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Base point of the affine solution space of the equations.
    pub base: Vec<Q>,
    /// Direction vectors spanning the solution space.
    pub basis: Vec<Vec<Q>>,
    /// Strictly interior point satisfying every clause, when feasible.
    pub sample: Option<Vec<Q>>,
    pub reason: Option<RejectReason>,
}

impl Feasibility {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// True when `coeffs · x = rhs` holds on the whole solution space.
    pub fn forces(&self, eq: &Equation) -> bool {
        forced(&self.base, &self.basis, eq)
    }

    /// The fixed value of variable `i`, when the solution space pins it.
    pub fn fixed_value(&self, i: usize) -> Option<Q> {
        self.basis.iter().all(|v| v[i].is_zero()).then(|| self.base[i])
    }
}

fn forced(base: &[Q], basis: &[Vec<Q>], eq: &Equation) -> bool {
    basis.iter().all(|v| dot(&eq.coeffs, v).is_zero()) && dot(&eq.coeffs, base) == eq.rhs
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Affine solution space of `eqs`, or `None` when inconsistent.
pub fn affine_solution(n: usize, eqs: &[Equation]) -> Option<(Vec<Q>, Vec<Vec<Q>>)> {
    let mut rows: Vec<Vec<Q>> = eqs
        .iter()
        .map(|e| {
            let mut r = e.coeffs.clone();
            r.push(e.rhs);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][col];
        for x in rows[r].iter_mut() {
            *x /= lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col];
                for j in 0..=n {
                    let v = rows[r][j];
                    rows[i][j] -= f * v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut base = vec![Q::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        base[c] = rows[i][n];
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Q::zero(); n];
            v[fc] = Q::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -rows[i][fc];
            }
            v
        })
        .collect();
    Some((base, basis))
}

/// `coeffs · t < rhs` (strict) or `<=`.
#[derive(Clone, Debug)]
struct Ineq {
    coeffs: Vec<Q>,
    rhs: Q,
    strict: bool,
}

/// Decides `lo < x_i < hi` for all i over the solution space of `sys`.
pub fn solve(sys: &LinearSystem, lo: Q, hi: Q) -> Feasibility {
    let n = sys.n_vars;
    solve_in_box(sys, &vec![lo; n], &vec![hi; n])
}

/// As [`solve`] with separate open bounds `lo[i] < x_i < hi[i]`.
pub fn solve_in_box(sys: &LinearSystem, lo: &[Q], hi: &[Q]) -> Feasibility {
    let n = sys.n_vars;
    let Some((base, basis)) = affine_solution(n, &sys.equations) else {
        return Feasibility {
            feasible: false,
            base: vec![Q::zero(); n],
            basis: Vec::new(),
            sample: None,
            reason: Some(RejectReason::InconsistentEquations),
        };
    };
    let reject = |reason| Feasibility {
        feasible: false,
        base: base.clone(),
        basis: basis.clone(),
        sample: None,
        reason: Some(reason),
    };
    for clause in &sys.clauses {
        if clause.forms.iter().all(|f| forced(&base, &basis, f)) {
            return reject(RejectReason::ForcedEquality(clause.tag.clone()));
        }
    }
    let k = basis.len();
    let ineqs = box_inequalities(&base, &basis, lo, hi);
    let Some(t) = fourier_motzkin_sample(k, ineqs.clone(), &vec![q(1, 2); k]) else {
        return reject(RejectReason::BoundsEmpty);
    };
    let to_x = |t: &[Q]| -> Vec<Q> {
        (0..n).map(|i| base[i] + basis.iter().zip(t).fold(Q::zero(), |a, (v, s)| a + v[i] * s)).collect()
    };
    let mut x = to_x(&t);
    if !clauses_hold(sys, &x) {
        x = perturb(sys, &ineqs, &t, &to_x).expect("open region avoids finitely many hyperplanes");
    }
    Feasibility { feasible: true, base, basis, sample: Some(x), reason: None }
}

fn box_inequalities(base: &[Q], basis: &[Vec<Q>], lo: &[Q], hi: &[Q]) -> Vec<Ineq> {
    let mut ineqs = Vec::new();
    for i in 0..base.len() {
        let row: Vec<Q> = basis.iter().map(|v| v[i]).collect();
        // x0_i + row·t < hi and -(x0_i + row·t) < -lo
        ineqs.push(Ineq { coeffs: row.clone(), rhs: hi[i] - base[i], strict: true });
        ineqs.push(Ineq { coeffs: row.iter().map(|c| -c).collect(), rhs: base[i] - lo[i], strict: true });
    }
    ineqs
}

/// A point of the open region `{equations} ∩ (lo, hi)^n` chosen by
/// `weights`: coordinate `j` of the parametrization sits at fraction
/// `weights[j]` of its admissible interval given the earlier ones.
/// Weights must lie strictly between 0 and 1. Clauses are ignored.
pub fn sample_region(sys: &LinearSystem, lo: Q, hi: Q, weights: &[Q]) -> Option<Vec<Q>> {
    let n = sys.n_vars;
    let (base, basis) = affine_solution(n, &sys.equations)?;
    let k = basis.len();
    let ineqs = box_inequalities(&base, &basis, &vec![lo; n], &vec![hi; n]);
    let w: Vec<Q> = (0..k).map(|j| weights.get(j).copied().unwrap_or(q(1, 2))).collect();
    let t = fourier_motzkin_sample(k, ineqs, &w)?;
    Some((0..n).map(|i| base[i] + basis.iter().zip(&t).fold(Q::zero(), |a, (v, s)| a + v[i] * s)).collect())
}

fn clauses_hold(sys: &LinearSystem, x: &[Q]) -> bool {
    sys.clauses.iter().all(|c| c.forms.iter().any(|f| !f.eval(x).is_zero()))
}

fn ineqs_hold(ineqs: &[Ineq], t: &[Q]) -> bool {
    ineqs.iter().all(|c| {
        let v = dot(&c.coeffs, t);
        if c.strict {
            v < c.rhs
        } else {
            v <= c.rhs
        }
    })
}

fn perturb(
    sys: &LinearSystem,
    ineqs: &[Ineq],
    t: &[Q],
    to_x: &dyn Fn(&[Q]) -> Vec<Q>,
) -> Option<Vec<Q>> {
    let k = t.len();
    for step in 1..64i128 {
        let eps = q(1, 1 << (step.min(60) as u32)) * q(1, 7);
        for j in 0..k {
            for sign in [1, -1] {
                let mut s = t.to_vec();
                for (m, sm) in s.iter_mut().enumerate() {
                    // distinct, non-colinear offsets per coordinate
                    *sm += eps * qi(sign * (1 + ((m + j) as i128 % k as i128) * 3 + m as i128));
                }
                if ineqs_hold(ineqs, &s) {
                    let x = to_x(&s);
                    if clauses_hold(sys, &x) {
                        return Some(x);
                    }
                }
            }
        }
    }
    None
}

/// Returns a point satisfying every inequality, or `None`.
fn fourier_motzkin_sample(k: usize, ineqs: Vec<Ineq>, weights: &[Q]) -> Option<Vec<Q>> {
    // stages[j] holds the system over t_0..t_{k-1-j}
    let mut stages = vec![ineqs];
    for var in (0..k).rev() {
        let cur = stages.last().expect("nonempty");
        let mut next = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for c in cur {
            let a = c.coeffs[var];
            if a.is_zero() {
                next.push(c.clone());
            } else if a.is_positive() {
                pos.push(c);
            } else {
                neg.push(c);
            }
        }
        for p in &pos {
            for m in &neg {
                let ap = p.coeffs[var];
                let am = -m.coeffs[var];
                let coeffs: Vec<Q> = (0..k).map(|i| p.coeffs[i] * am + m.coeffs[i] * ap).collect();
                next.push(Ineq { coeffs, rhs: p.rhs * am + m.rhs * ap, strict: p.strict || m.strict });
            }
        }
        dedupe(&mut next);
        stages.push(next);
    }
    for c in stages.last().expect("nonempty") {
        let ok = if c.strict { Q::zero() < c.rhs } else { Q::zero() <= c.rhs };
        if !ok {
            return None;
        }
    }
    let mut t = vec![Q::zero(); k];
    for var in 0..k {
        let stage = &stages[k - 1 - var];
        let (mut lo, mut hi): (Option<Q>, Option<Q>) = (None, None);
        for c in stage {
            let a = c.coeffs[var];
            if a.is_zero() {
                continue;
            }
            let rest: Q = (0..var).fold(Q::zero(), |acc, i| acc + c.coeffs[i] * t[i]);
            let bound = (c.rhs - rest) / a;
            if a.is_positive() {
                hi = Some(hi.map_or(bound, |h| h.min(bound)));
            } else {
                lo = Some(lo.map_or(bound, |l| l.max(bound)));
            }
        }
        t[var] = match (lo, hi) {
            (Some(l), Some(h)) => l + (h - l) * weights[var],
            (Some(l), None) => l + Q::one(),
            (None, Some(h)) => h - Q::one(),
            (None, None) => Q::zero(),
        };
    }
    Some(t)
}

fn dedupe(v: &mut Vec<Ineq>) {
    let mut seen: Vec<(Vec<Q>, Q, bool)> = Vec::new();
    v.retain(|c| {
        let lead = c.coeffs.iter().find(|x| !x.is_zero()).map(|x| x.abs());
        let key = match lead {
            Some(l) => (c.coeffs.iter().map(|x| x / l).collect(), c.rhs / l, c.strict),
            None => (c.coeffs.clone(), c.rhs, c.strict),
        };
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: [i128; 4], rhs: Q) -> Equation {
        Equation::new(c.iter().map(|&x| qi(x)).collect(), rhs)
    }

    #[test]
    fn forced_beta_gamma() {
        let mut s = LinearSystem::new(4);
        s.push_equation(eq([2, 1, 0, 0], qi(2)));
        s.push_equation(eq([2, 0, 1, 0], qi(2)));
        let fz = solve(&s, qi(0), qi(1));
        assert!(fz.feasible);
        assert!(fz.forces(&eq([0, 1, -1, 0], qi(0))));
        s.push_clause(Clause { tag: "beta!=gamma".into(), forms: vec![eq([0, 1, -1, 0], qi(0))] });
        let fz = solve(&s, qi(0), qi(1));
        assert_eq!(fz.reason, Some(RejectReason::ForcedEquality("beta!=gamma".into())));
    }

    #[test]
    fn area_against_full_vertex() {
        let mut s = LinearSystem::new(4);
        s.push_equation(eq([1, 1, 1, 1], q(5, 2)));
        s.push_equation(eq([1, 1, 1, 1], qi(2)));
        assert_eq!(solve(&s, qi(0), qi(2)).reason, Some(RejectReason::InconsistentEquations));
    }

    #[test]
    fn strict_bounds() {
        let mut s = LinearSystem::new(2);
        s.push_equation(Equation::new(vec![qi(1), qi(1)], qi(2)));
        assert_eq!(solve(&s, qi(0), qi(1)).reason, Some(RejectReason::BoundsEmpty));
        let fz = solve(&s, qi(0), qi(2));
        assert!(fz.feasible);
        let x = fz.sample.unwrap();
        assert_eq!(x[0] + x[1], qi(2));
        assert!(x.iter().all(|v| *v > qi(0) && *v < qi(2)));
    }

    #[test]
    fn sample_avoids_clause_hyperplane() {
        let mut s = LinearSystem::new(2);
        s.push_equation(Equation::new(vec![qi(1), qi(1)], qi(1)));
        s.push_clause(Clause { tag: "x!=y".into(), forms: vec![Equation::new(vec![qi(1), qi(-1)], qi(0))] });
        let fz = solve(&s, qi(0), qi(1));
        let x = fz.sample.unwrap();
        assert_ne!(x[0], x[1]);
        assert_eq!(x[0] + x[1], qi(1));
    }

    #[test]
    fn dimension_and_fixed() {
        let mut s = LinearSystem::new(4);
        s.push_equation(eq([0, 6, 0, 0], qi(2)));
        s.push_equation(eq([1, 0, 1, 1], qi(2)));
        s.push_equation(eq([1, 1, 1, 1], q(7, 3)));
        let fz = solve(&s, qi(0), qi(1));
        assert!(fz.feasible);
        assert_eq!(fz.dimension(), 2);
        assert_eq!(fz.fixed_value(1), Some(q(1, 3)));
        assert_eq!(s.equations.len(), 3);
    }
}
