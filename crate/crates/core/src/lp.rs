//! Dense two-phase simplex over exact rationals.
//!
//! Problems are small (a handful of variables, at most a few dozen rows), so
//! a full tableau is fine. Pivoting follows Bland's rule, which rules out
//! cycling on the degenerate instances that dominance tests produce.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {row} has {found} coefficients, expected {expected}")]
    Shape {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("linear program defect: {0}")]
    Defect(String),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    kinds: Vec<Column>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    /// Resets the objective row to maximize `costs` (one per column).
    fn set_objective(&mut self, costs: &[Rational]) {
        let w = self.width();
        self.obj = costs.iter().map(|c| -c).collect();
        self.obj.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if !costs[b].is_zero() {
                let c = costs[b].clone();
                for j in 0..=w {
                    if !self.rows[r][j].is_zero() {
                        let d = &c * &self.rows[r][j];
                        self.obj[j] += d;
                    }
                }
            }
        }
    }

    /// Runs simplex iterations; returns false if unbounded.
    fn optimize(&mut self, allowed: impl Fn(Column) -> bool) -> bool {
        let w = self.width();
        loop {
            let entering = (0..w).find(|&j| allowed(self.kinds[j]) && self.obj[j].is_negative());
            let Some(col) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if row[col].is_positive() {
                    let ratio = &row[w] / &row[col];
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => {
                            ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let n = lp.objective.len();
    for (row, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(LpError::Shape {
                row,
                found: c.coeffs.len(),
                expected: n,
            });
        }
    }
    // normalize to nonnegative right-hand sides
    let rows: Vec<(Vec<Rational>, Relation, Rational)> = lp
        .constraints
        .iter()
        .map(|c| {
            if c.rhs.is_negative() {
                let flipped = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flipped, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();

    let mut kinds = vec![Column::Original; n];
    let mut slack_col = vec![None; rows.len()];
    let mut art_col = vec![None; rows.len()];
    for (r, (_, rel, _)) in rows.iter().enumerate() {
        match rel {
            Relation::Le => {
                slack_col[r] = Some(kinds.len());
                kinds.push(Column::Slack);
            }
            Relation::Ge => {
                slack_col[r] = Some(kinds.len());
                kinds.push(Column::Slack);
                art_col[r] = Some(kinds.len());
                kinds.push(Column::Artificial);
            }
            Relation::Eq => {
                art_col[r] = Some(kinds.len());
                kinds.push(Column::Artificial);
            }
        }
    }
    let w = kinds.len();
    let mut table = Vec::with_capacity(rows.len());
    let mut basis = Vec::with_capacity(rows.len());
    for (r, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let mut row = vec![Rational::zero(); w + 1];
        row[..n].clone_from_slice(coeffs);
        if let Some(s) = slack_col[r] {
            row[s] = if *rel == Relation::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
        }
        if let Some(a) = art_col[r] {
            row[a] = Rational::one();
            basis.push(a);
        } else {
            basis.push(slack_col[r].expect("slack for <= row"));
        }
        row[w] = rhs.clone();
        table.push(row);
    }
    let mut t = Tableau {
        rows: table,
        obj: Vec::new(),
        basis,
        kinds,
    };

    // phase 1: drive artificials to zero
    if t.kinds.contains(&Column::Artificial) {
        let costs: Vec<Rational> = t
            .kinds
            .iter()
            .map(|k| {
                if *k == Column::Artificial {
                    -Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        t.set_objective(&costs);
        if !t.optimize(|_| true) {
            return Err(LpError::Defect("phase one reported unbounded".into()));
        }
        if t.obj[w].is_negative() {
            return Ok(LpSolution::Infeasible);
        }
        // pivot remaining (zero-valued) artificials out of the basis
        let mut r = 0;
        while r < t.rows.len() {
            if t.kinds[t.basis[r]] == Column::Artificial {
                match (0..w).find(|&j| t.kinds[j] != Column::Artificial && !t.rows[r][j].is_zero()) {
                    Some(j) => {
                        t.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        // redundant row
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for row in t.rows.iter_mut() {
            for (j, k) in t.kinds.iter().enumerate() {
                if *k == Column::Artificial {
                    row[j] = Rational::zero();
                }
            }
        }
    }

    let mut costs = lp.objective.clone();
    costs.resize(w, Rational::zero());
    t.set_objective(&costs);
    if !t.optimize(|k| k != Column::Artificial) {
        return Ok(LpSolution::Unbounded);
    }
    let mut point = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = t.rows[r][w].clone();
        }
    }
    Ok(LpSolution::Optimal {
        value: t.obj[w].clone(),
        point,
    })
}
