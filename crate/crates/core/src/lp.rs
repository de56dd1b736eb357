//! Dense two-phase simplex with exact arithmetic.
//!
//! The entering column is the most negative reduced cost, except during
//! runs of degenerate pivots where Bland's rule (lowest index entering,
//! lowest basic index among ratio ties) takes over so the method cannot
//! cycle. The problems solved here have at most a few hundred columns, so
//! a dense tableau is adequate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `optimize objective·x` subject to the constraints, with `x ≥ 0` except
/// for variables marked free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    constraints: Vec<Constraint>,
    objective: Vec<Rational>,
    sense: Sense,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Optimal(Solution),
    Infeasible,
    Unbounded,
}

impl Outcome {
    pub fn optimal(self) -> Option<Solution> {
        match self {
            Outcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            free: vec![false; num_vars],
            constraints: Vec::new(),
            objective: vec![rational::zero(); num_vars],
            sense,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_objective(&mut self, coeffs: Vec<Rational>) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: coeffs.len(),
            });
        }
        self.objective = coeffs;
        Ok(())
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: coeffs.len(),
            });
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    /// Sparse form of [`add_constraint`](Self::add_constraint); repeated
    /// indices accumulate.
    pub fn add_sparse(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) -> Result<()> {
        let mut coeffs = vec![rational::zero(); self.num_vars];
        for (k, c) in terms {
            if *k >= self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: *k + 1,
                });
            }
            coeffs[*k] += c;
        }
        self.add_constraint(coeffs, relation, rhs)
    }

    pub fn solve(&self) -> Outcome {
        Tableau::build(self).solve(self)
    }
}

/// Integer tableau with a common positive denominator `det`: the current
/// value of entry `(r, c)` is `rows[r][c] / det`. Pivots use fraction-free
/// elimination, where every update divides exactly by the previous
/// denominator, so no gcd is ever taken.
struct Tableau {
    rows: Vec<Vec<BigInt>>,
    det: BigInt,
    basis: Vec<usize>,
    /// Structural column count after splitting free variables.
    structural: usize,
    /// Columns at or after this index are artificial.
    first_artificial: usize,
    width: usize,
    /// Structural column of each original variable and, if free, its
    /// negative part.
    columns: Vec<(usize, Option<usize>)>,
}

/// Scales a rational row by the lcm of its denominators.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut columns = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for &f in &lp.free {
            if f {
                columns.push((next, Some(next + 1)));
                next += 2;
            } else {
                columns.push((next, None));
                next += 1;
            }
        }
        let structural = next;

        // Integer rows (coefficients then rhs) with nonnegative rhs.
        let normalized: Vec<(Vec<BigInt>, Relation)> = lp
            .constraints
            .iter()
            .map(|c| {
                let mut row = vec![rational::zero(); structural + 1];
                for (v, coef) in c.coeffs.iter().enumerate() {
                    let (pos, neg) = columns[v];
                    row[pos] = coef.clone();
                    if let Some(neg) = neg {
                        row[neg] = -coef;
                    }
                }
                row[structural] = c.rhs.clone();
                // A zero right-hand side `≥` row flips to `≤` and so needs
                // no artificial variable.
                let flip = c.rhs.is_negative() || (c.rhs.is_zero() && c.relation == Relation::Ge);
                let mut row = integer_row(&row);
                if flip {
                    row.iter_mut().for_each(|x| *x = -&*x);
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (row, rel)
                } else {
                    (row, c.relation)
                }
            })
            .collect();

        let slacks = normalized.iter().filter(|(_, r)| *r != Relation::Eq).count();
        let artificials = normalized.iter().filter(|(_, r)| *r != Relation::Le).count();
        let first_artificial = structural + slacks;
        let width = first_artificial + artificials;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let mut slack_col = structural;
        let mut art_col = first_artificial;
        for (mut coeffs, rel) in normalized {
            let rhs = coeffs.pop().unwrap_or_default();
            let mut row = coeffs;
            row.resize(width + 1, BigInt::zero());
            match rel {
                Relation::Le => {
                    row[slack_col] = BigInt::one();
                    basis.push(slack_col);
                    slack_col += 1;
                }
                Relation::Ge => {
                    row[slack_col] = -BigInt::one();
                    slack_col += 1;
                    row[art_col] = BigInt::one();
                    basis.push(art_col);
                    art_col += 1;
                }
                Relation::Eq => {
                    row[art_col] = BigInt::one();
                    basis.push(art_col);
                    art_col += 1;
                }
            }
            row[width] = rhs;
            rows.push(row);
        }
        Tableau {
            rows,
            det: BigInt::one(),
            basis,
            structural,
            first_artificial,
            width,
            columns,
        }
    }

    fn pivot(&mut self, r: usize, c: usize, objective: &mut [BigInt]) {
        let p = self.rows[r][c].clone();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let det = &self.det;
        let eliminate = |row: &mut [BigInt]| {
            let f = row[c].clone();
            let unit = det.is_one();
            for (x, q) in row.iter_mut().zip(&pivot_row) {
                let cross = !f.is_zero() && !q.is_zero();
                if x.is_zero() && !cross {
                    continue;
                }
                let mut v = &p * &*x;
                if cross {
                    v -= &f * q;
                }
                if !unit {
                    debug_assert!((&v % det).is_zero(), "inexact fraction-free update");
                    v /= det;
                }
                *x = v;
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(objective);
        self.rows[r] = pivot_row;
        self.det = p;
        if self.det.is_negative() {
            self.det = -&self.det;
            for x in self.rows.iter_mut().flatten().chain(objective.iter_mut()) {
                *x = -&*x;
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs of `cost` under the current basis, scaled by `det`.
    fn reduced_costs(&self, cost: &[BigInt]) -> Vec<BigInt> {
        let mut z: Vec<BigInt> = cost.iter().map(|c| c * &self.det).collect();
        z.push(BigInt::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (zk, a) in z.iter_mut().zip(row) {
                if !a.is_zero() {
                    *zk -= cb * a;
                }
            }
        }
        z
    }

    /// Minimizes over columns below `limit`, entering the most negative
    /// reduced cost and switching to Bland's rule while pivots are
    /// degenerate so that cycling is impossible. Returns false if unbounded.
    fn minimize(&mut self, z: &mut [BigInt], limit: usize) -> bool {
        let mut degenerate = false;
        loop {
            let entering = if degenerate {
                (0..limit).find(|&c| z[c].is_negative())
            } else {
                (0..limit)
                    .filter(|&c| z[c].is_negative())
                    .min_by(|&a, &b| z[a].cmp(&z[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else {
                return true;
            };
            // Ratio test: smallest rhs/col over positive column entries,
            // ties to the lowest basic variable index.
            let mut best: Option<usize> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(br) => {
                        let b = &self.rows[br];
                        let lhs = &row[self.width] * &b[c];
                        let rhs = &b[self.width] * &row[c];
                        lhs < rhs || (lhs == rhs && self.basis[r] < self.basis[br])
                    }
                };
                if better {
                    best = Some(r);
                }
            }
            let Some(r) = best else {
                return false;
            };
            degenerate = self.rows[r][self.width].is_zero();
            self.pivot(r, c, z);
        }
    }

    fn solve(mut self, lp: &LinearProgram) -> Outcome {
        // Phase 1: minimize the sum of artificials.
        if self.first_artificial < self.width {
            let mut cost = vec![BigInt::zero(); self.width];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = BigInt::one();
            }
            let mut z = self.reduced_costs(&cost);
            self.minimize(&mut z, self.width);
            if !z[self.width].is_zero() {
                return Outcome::Infeasible;
            }
            // Drive artificials out of the basis; drop redundant rows.
            let mut r = 0;
            while r < self.rows.len() {
                if self.basis[r] >= self.first_artificial {
                    let col = (0..self.first_artificial).find(|&c| !self.rows[r][c].is_zero());
                    match col {
                        Some(c) => self.pivot(r, c, &mut z),
                        None => {
                            self.rows.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        // Phase 2.
        let mut cost = vec![rational::zero(); self.width];
        for (v, coef) in lp.objective.iter().enumerate() {
            let c = match lp.sense {
                Sense::Minimize => coef.clone(),
                Sense::Maximize => -coef,
            };
            let (pos, neg) = self.columns[v];
            if let Some(neg) = neg {
                cost[neg] = -&c;
            }
            cost[pos] = c;
        }
        let mut z = self.reduced_costs(&integer_row(&cost));
        if !self.minimize(&mut z, self.first_artificial) {
            return Outcome::Unbounded;
        }

        let mut values = vec![rational::zero(); self.structural];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.structural {
                values[b] = Rational::new(row[self.width].clone(), self.det.clone());
            }
        }
        let x: Vec<Rational> = self
            .columns
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect();
        let value = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
        Outcome::Optimal(Solution { x, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y; x ≤ 4; 2y ≤ 12; 3x + 2y ≤ 18  →  (2, 6), 36
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(v(&[3, 5])).unwrap();
        lp.add_constraint(v(&[1, 0]), Relation::Le, int(4)).unwrap();
        lp.add_constraint(v(&[0, 2]), Relation::Le, int(12)).unwrap();
        lp.add_constraint(v(&[3, 2]), Relation::Le, int(18)).unwrap();
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.x, v(&[2, 6]));
        assert_eq!(s.value, int(36));
    }

    #[test]
    fn equality_and_ge_rows() {
        // min x + 2y; x + y = 1; x ≥ 1/3
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.set_objective(v(&[1, 2])).unwrap();
        lp.add_constraint(v(&[1, 1]), Relation::Eq, int(1)).unwrap();
        lp.add_constraint(v(&[1, 0]), Relation::Ge, ratio(1, 3)).unwrap();
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.x, v(&[1, 0]));
        assert_eq!(s.value, int(1));
    }

    #[test]
    fn free_variables_can_go_negative() {
        // max t; t ≤ x − 3; x ≤ 1; t free
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_free(1);
        lp.set_objective(v(&[0, 1])).unwrap();
        lp.add_constraint(v(&[-1, 1]), Relation::Le, int(-3)).unwrap();
        lp.add_constraint(v(&[1, 0]), Relation::Le, int(1)).unwrap();
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, int(-2));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.set_objective(v(&[1])).unwrap();
        lp.add_constraint(v(&[1]), Relation::Le, int(1)).unwrap();
        lp.add_constraint(v(&[1]), Relation::Ge, int(2)).unwrap();
        assert_eq!(lp.solve(), Outcome::Infeasible);

        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.set_objective(v(&[1])).unwrap();
        lp.add_constraint(v(&[1]), Relation::Ge, int(2)).unwrap();
        assert_eq!(lp.solve(), Outcome::Unbounded);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(v(&[1, 0])).unwrap();
        lp.add_constraint(v(&[1, 1]), Relation::Eq, int(1)).unwrap();
        lp.add_constraint(v(&[2, 2]), Relation::Eq, int(2)).unwrap();
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, int(1));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example (cycles under the textbook largest-coefficient rule).
        let mut lp = LinearProgram::new(4, Sense::Minimize);
        lp.set_objective(vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)])
            .unwrap();
        lp.add_constraint(vec![ratio(1, 4), int(-60), ratio(-1, 25), int(9)], Relation::Le, int(0))
            .unwrap();
        lp.add_constraint(vec![ratio(1, 2), int(-90), ratio(-1, 50), int(3)], Relation::Le, int(0))
            .unwrap();
        lp.add_constraint(v(&[0, 0, 1, 0]), Relation::Le, int(1)).unwrap();
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, ratio(-1, 20));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        assert!(lp.add_constraint(v(&[1]), Relation::Le, int(1)).is_err());
        assert!(lp.set_objective(v(&[1, 2, 3])).is_err());
        assert!(lp.add_sparse(&[(5, int(1))], Relation::Le, int(0)).is_err());
    }
}
