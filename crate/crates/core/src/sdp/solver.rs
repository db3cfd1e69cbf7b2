//! Infeasible primal-dual path-following method with the HKM search direction
//! and Mehrotra's predictor-corrector.
//!
//! Internally the problem is `min ⟨C, X⟩` subject to `⟨A_k, X⟩ − s_k = b_k`,
//! where `s_k` is a nonnegative slack for inequality rows and absent for
//! equality rows. The dual is `max bᵀy` with `Σ y_k A_k + S = C`, `S ⪰ 0` and
//! `y_k ≥ 0` on inequality rows.

use nalgebra::{DMatrix, DVector};

use super::rank::independent_rows;
use super::{
    LinearConstraint, Residuals, SdpError, SdpProblem, SdpSolution, Sense, SolveOptions, SolveStatus,
    SparseSym,
};
use crate::linalg::SymMatrix;

/// Objective magnitude beyond which the iterates are considered divergent.
const DIVERGENCE: f64 = 1e12;

struct Row {
    /// Full (both orientations) entries of the constraint matrix.
    entries: Vec<(usize, usize, f64)>,
    rhs: f64,
    ineq: bool,
}

struct Iterate {
    x: DMatrix<f64>,
    s: DMatrix<f64>,
    y: Vec<f64>,
    /// Primal slacks; zero on equality rows.
    slack: Vec<f64>,
}

struct Direction {
    dx: DMatrix<f64>,
    ds: DMatrix<f64>,
    dy: Vec<f64>,
    dslack: Vec<f64>,
}

pub fn solve(p: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution, SdpError> {
    p.validate()?;
    p.check_limits()?;
    let n = p.dim;
    let sign = match p.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let c = DMatrix::from_vec(n, n, p.objective.scale(sign).as_slice().to_vec());

    // Rows are solved in a canonical order so the result does not depend on
    // the order in which constraints were added.
    let eq_order = canonical_order(&p.equalities);
    let ineq_order = canonical_order(&p.inequalities);
    let eq_refs: Vec<&SparseSym> = eq_order.iter().map(|&k| &p.equalities[k].matrix).collect();
    let mut positions = independent_rows(&eq_refs);
    positions.sort_unstable();
    let kept: Vec<usize> = positions.into_iter().map(|pos| eq_order[pos]).collect();
    let mut rows: Vec<Row> = kept
        .iter()
        .map(|&k| Row {
            entries: p.equalities[k].matrix.full_entries(),
            rhs: p.equalities[k].rhs,
            ineq: false,
        })
        .collect();
    rows.extend(ineq_order.iter().map(|&k| Row {
        entries: p.inequalities[k].matrix.full_entries(),
        rhs: p.inequalities[k].rhs,
        ineq: true,
    }));

    let mut engine = Engine::new(n, c, rows, opts);
    let outcome = engine.run();
    let best = engine.best.take().unwrap_or_else(|| engine.snapshot());

    let x = SymMatrix::symmetrized(n, best.it.x.as_slice());
    let dual_slack = SymMatrix::symmetrized(n, best.it.s.as_slice());
    let mut y_eq = vec![0.0; p.equalities.len()];
    for (pos, &k) in kept.iter().enumerate() {
        y_eq[k] = best.it.y[pos];
    }
    let mut y_ineq = vec![0.0; p.inequalities.len()];
    for (pos, &k) in ineq_order.iter().enumerate() {
        y_ineq[k] = best.it.y[kept.len() + pos];
    }
    let mut kept_sorted = kept.clone();
    kept_sorted.sort_unstable();

    let mut status = match outcome {
        Outcome::Converged => SolveStatus::Optimal,
        Outcome::Diverged => SolveStatus::Infeasible,
        Outcome::Stalled if best.converged => SolveStatus::Optimal,
        Outcome::Stalled => SolveStatus::NumericalTrouble,
    };
    // Dependent rows were dropped before solving; they must hold at the answer.
    if status == SolveStatus::Optimal {
        let dropped_violated = p.equalities.iter().enumerate().any(|(k, e)| {
            kept_sorted.binary_search(&k).is_err()
                && (e.matrix.inner(&x) - e.rhs).abs() > 1e3 * opts.feas_tol * (1.0 + e.rhs.abs())
        });
        if dropped_violated {
            status = SolveStatus::Infeasible;
        }
    }

    Ok(SdpSolution {
        status,
        primal_value: sign * best.pobj,
        dual_value: sign * best.dobj,
        x,
        dual_slack,
        y_eq,
        y_ineq,
        iterations: engine.iterations,
        residuals: best.res,
    })
}

fn canonical_order(cs: &[LinearConstraint]) -> Vec<usize> {
    let keys: Vec<Vec<(usize, usize, f64)>> = cs
        .iter()
        .map(|c| {
            let mut e: Vec<(usize, usize, f64)> = c.matrix.full_entries().into_iter().filter(|&(i, j, _)| i <= j).collect();
            e.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
            e.push((usize::MAX, usize::MAX, c.rhs));
            e
        })
        .collect();
    let mut order: Vec<usize> = (0..cs.len()).collect();
    order.sort_by(|&a, &b| {
        keys[a]
            .iter()
            .zip(&keys[b])
            .map(|(x, y)| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)))
            .find(|o| o.is_ne())
            .unwrap_or(keys[a].len().cmp(&keys[b].len()))
    });
    order
}

enum Outcome {
    Converged,
    Diverged,
    Stalled,
}

struct Snapshot {
    it: Iterate,
    pobj: f64,
    dobj: f64,
    res: Residuals,
    converged: bool,
    score: f64,
}

struct Engine<'a> {
    n: usize,
    c: DMatrix<f64>,
    rows: Vec<Row>,
    opts: &'a SolveOptions,
    it: Iterate,
    b_norm: f64,
    c_norm: f64,
    best: Option<Snapshot>,
    iterations: usize,
}

impl<'a> Engine<'a> {
    fn new(n: usize, c: DMatrix<f64>, rows: Vec<Row>, opts: &'a SolveOptions) -> Self {
        let b_max = rows.iter().fold(0.0, |m: f64, r| m.max(r.rhs.abs()));
        let b_norm = rows.iter().map(|r| r.rhs * r.rhs).sum::<f64>().sqrt();
        let c_norm = c.norm();
        let a_max = rows.iter().fold(0.0, |m: f64, r| {
            m.max(r.entries.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt())
        });
        let xi = 1.0 + b_max;
        let eta = (1.0 + c_norm.max(a_max)).max((n as f64).sqrt());
        let it = Iterate {
            x: DMatrix::identity(n, n) * xi,
            s: DMatrix::identity(n, n) * eta,
            y: rows.iter().map(|r| if r.ineq { eta } else { 0.0 }).collect(),
            slack: rows.iter().map(|r| if r.ineq { xi } else { 0.0 }).collect(),
        };
        Engine {
            n,
            c,
            rows,
            opts,
            it,
            b_norm,
            c_norm,
            best: None,
            iterations: 0,
        }
    }

    fn a_apply(&self, x: &DMatrix<f64>, k: usize) -> f64 {
        self.rows[k]
            .entries
            .iter()
            .map(|&(i, j, v)| v * x[(i, j)])
            .sum()
    }

    /// `Σ_k y_k A_k` as a dense matrix.
    fn a_adjoint(&self, y: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.n, self.n);
        for (row, &yk) in self.rows.iter().zip(y) {
            if yk == 0.0 {
                continue;
            }
            for &(i, j, v) in &row.entries {
                out[(i, j)] += yk * v;
            }
        }
        out
    }

    fn primal_residual(&self, it: &Iterate) -> Vec<f64> {
        (0..self.rows.len())
            .map(|k| self.rows[k].rhs - self.a_apply(&it.x, k) + it.slack[k])
            .collect()
    }

    fn dual_residual(&self, it: &Iterate) -> DMatrix<f64> {
        &self.c - self.a_adjoint(&it.y) - &it.s
    }

    fn objectives(&self, it: &Iterate) -> (f64, f64) {
        let pobj = self.c.dot(&it.x);
        let dobj = self.rows.iter().zip(&it.y).map(|(r, y)| r.rhs * y).sum();
        (pobj, dobj)
    }

    fn measure(&self, it: &Iterate) -> (f64, f64, Residuals) {
        let rp = self.primal_residual(it);
        let rd = self.dual_residual(it);
        let (pobj, dobj) = self.objectives(it);
        let res = Residuals {
            primal: rp.iter().map(|v| v * v).sum::<f64>().sqrt() / (1.0 + self.b_norm),
            dual: rd.norm() / (1.0 + self.c_norm),
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs()),
        };
        (pobj, dobj, res)
    }

    fn snapshot(&self) -> Snapshot {
        let (pobj, dobj, res) = self.measure(&self.it);
        let converged = res.gap <= self.opts.gap_tol
            && res.primal <= self.opts.feas_tol
            && res.dual <= self.opts.feas_tol;
        Snapshot {
            it: Iterate {
                x: self.it.x.clone(),
                s: self.it.s.clone(),
                y: self.it.y.clone(),
                slack: self.it.slack.clone(),
            },
            pobj,
            dobj,
            res,
            converged,
            score: res.gap.max(res.primal).max(res.dual),
        }
    }

    fn mu(&self, x: &DMatrix<f64>, s: &DMatrix<f64>, slack: &[f64], y: &[f64]) -> f64 {
        let mut total = x.dot(s);
        let mut count = self.n;
        for (k, r) in self.rows.iter().enumerate() {
            if r.ineq {
                total += slack[k] * y[k];
                count += 1;
            }
        }
        total / count as f64
    }

    fn run(&mut self) -> Outcome {
        let mut stall = 0;
        for iter in 0..=self.opts.max_iter {
            self.iterations = iter;
            let snap = self.snapshot();
            let converged = snap.converged;
            let (pobj, dobj, res) = (snap.pobj, snap.dobj, snap.res);
            let improved = self.best.as_ref().is_none_or(|b| {
                (snap.converged && !b.converged) || (snap.converged == b.converged && snap.score < b.score)
            });
            if improved {
                self.best = Some(snap);
                stall = 0;
            } else {
                stall += 1;
            }
            if converged {
                return Outcome::Converged;
            }
            if (dobj > DIVERGENCE * (1.0 + self.c_norm) && res.primal > self.opts.feas_tol)
                || (pobj < -DIVERGENCE * (1.0 + self.b_norm) && res.dual > self.opts.feas_tol)
            {
                return Outcome::Diverged;
            }
            if iter == self.opts.max_iter || stall > 30 {
                return Outcome::Stalled;
            }
            if self.step().is_none() {
                return Outcome::Stalled;
            }
        }
        Outcome::Stalled
    }

    /// One predictor-corrector step. `None` on a numerical breakdown.
    fn step(&mut self) -> Option<()> {
        let m = self.rows.len();
        let s_chol = self.it.s.clone().cholesky()?;
        let s_inv = s_chol.inverse();
        let s_inv = (&s_inv + s_inv.transpose()) * 0.5;
        let rp = self.primal_residual(&self.it);
        let rd = self.dual_residual(&self.it);
        let mu = self.mu(&self.it.x, &self.it.s, &self.it.slack, &self.it.y);

        let schur = self.schur(&s_inv);
        let schur_chol = factor(schur, m)?;

        // X Rd S⁻¹ is shared by predictor and corrector.
        let x_rd_sinv = &self.it.x * &rd * &s_inv;

        let pred = self.direction(&schur_chol, &s_inv, &rp, &rd, &x_rd_sinv, 0.0, None);
        let (ap, ad) = self.step_lengths(&pred)?;

        let sigma;
        let dir = if self.opts.predictor_corrector {
            let x_aff = &self.it.x + &pred.dx * ap;
            let s_aff = &self.it.s + &pred.ds * ad;
            let slack_aff: Vec<f64> = (0..m).map(|k| self.it.slack[k] + ap * pred.dslack[k]).collect();
            let y_aff: Vec<f64> = (0..m).map(|k| self.it.y[k] + ad * pred.dy[k]).collect();
            let mu_aff = self.mu(&x_aff, &s_aff, &slack_aff, &y_aff);
            sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
            self.direction(&schur_chol, &s_inv, &rp, &rd, &x_rd_sinv, sigma * mu, Some(&pred))
        } else {
            sigma = 0.3;
            self.direction(&schur_chol, &s_inv, &rp, &rd, &x_rd_sinv, sigma * mu, None)
        };
        let (ap, ad) = self.step_lengths(&dir)?;

        self.it.x += &dir.dx * ap;
        self.it.x = (&self.it.x + self.it.x.transpose()) * 0.5;
        self.it.s += &dir.ds * ad;
        self.it.s = (&self.it.s + self.it.s.transpose()) * 0.5;
        for k in 0..m {
            self.it.y[k] += ad * dir.dy[k];
            if self.rows[k].ineq {
                self.it.slack[k] += ap * dir.dslack[k];
            }
        }
        Some(())
    }

    /// `M_kl = ⟨A_k, X A_l S⁻¹⟩` plus `s_k / y_k` on inequality diagonals.
    fn schur(&self, s_inv: &DMatrix<f64>) -> DMatrix<f64> {
        let m = self.rows.len();
        let n = self.n;
        let x = &self.it.x;
        let mut mat = DMatrix::zeros(m, m);
        // Dense rows go through P_l = X A_l S⁻¹ explicitly.
        let dense: Vec<Option<DMatrix<f64>>> = self
            .rows
            .iter()
            .map(|r| {
                (r.entries.len() > 2 * n).then(|| {
                    let mut a = DMatrix::zeros(n, n);
                    for &(i, j, v) in &r.entries {
                        a[(i, j)] += v;
                    }
                    x * a * s_inv
                })
            })
            .collect();
        for k in 0..m {
            for l in k..m {
                let v = match (&dense[k], &dense[l]) {
                    (_, Some(pl)) => self.rows[k].entries.iter().map(|&(i, j, a)| a * pl[(i, j)]).sum(),
                    (Some(pk), None) => self.rows[l].entries.iter().map(|&(i, j, a)| a * pk[(i, j)]).sum(),
                    (None, None) => {
                        let mut acc = 0.0;
                        for &(p, q, a) in &self.rows[k].entries {
                            for &(r, t, b) in &self.rows[l].entries {
                                acc += a * b * x[(p, r)] * s_inv[(t, q)];
                            }
                        }
                        acc
                    }
                };
                mat[(k, l)] = v;
                mat[(l, k)] = v;
            }
            if self.rows[k].ineq {
                mat[(k, k)] += self.it.slack[k] / self.it.y[k];
            }
        }
        mat
    }

    #[allow(clippy::too_many_arguments)]
    fn direction(
        &self,
        schur: &nalgebra::Cholesky<f64, nalgebra::Dyn>,
        s_inv: &DMatrix<f64>,
        rp: &[f64],
        rd: &DMatrix<f64>,
        x_rd_sinv: &DMatrix<f64>,
        target: f64,
        corr: Option<&Direction>,
    ) -> Direction {
        let m = self.rows.len();
        let mut g = s_inv * target - &self.it.x - x_rd_sinv;
        if let Some(c) = corr {
            g -= &c.dx * &c.ds * s_inv;
        }
        let lp_term = |k: usize| -> f64 {
            let mut t = target - self.it.slack[k] * self.it.y[k];
            if let Some(c) = corr {
                t -= c.dslack[k] * c.dy[k];
            }
            t
        };
        let rhs = DVector::from_iterator(
            m,
            (0..m).map(|k| {
                let mut v = rp[k] - self.a_apply(&g, k);
                if self.rows[k].ineq {
                    v += lp_term(k) / self.it.y[k];
                }
                v
            }),
        );
        let dy: Vec<f64> = if m == 0 {
            Vec::new()
        } else {
            schur.solve(&rhs).iter().copied().collect()
        };
        let ady = self.a_adjoint(&dy);
        let ds = rd - &ady;
        let mut dx = g + &self.it.x * &ady * s_inv;
        dx = (&dx + dx.transpose()) * 0.5;
        let dslack = (0..m)
            .map(|k| {
                if self.rows[k].ineq {
                    (lp_term(k) - self.it.slack[k] * dy[k]) / self.it.y[k]
                } else {
                    0.0
                }
            })
            .collect();
        Direction { dx, ds, dy, dslack }
    }

    fn step_lengths(&self, d: &Direction) -> Option<(f64, f64)> {
        let gamma = self.opts.step_fraction;
        let mut ap = max_psd_step(&self.it.x, &d.dx)?;
        let mut ad = max_psd_step(&self.it.s, &d.ds)?;
        for (k, r) in self.rows.iter().enumerate() {
            if !r.ineq {
                continue;
            }
            if d.dslack[k] < 0.0 {
                ap = ap.min(-self.it.slack[k] / d.dslack[k]);
            }
            if d.dy[k] < 0.0 {
                ad = ad.min(-self.it.y[k] / d.dy[k]);
            }
        }
        Some(((gamma * ap).min(1.0), (gamma * ad).min(1.0)))
    }
}

/// Largest `α` with `X + α ΔX ⪰ 0`, from `λ_min(L⁻¹ ΔX L⁻ᵀ)` where `X = L Lᵀ`.
fn max_psd_step(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let l = x.clone().cholesky()?.unpack();
    let w = l.solve_lower_triangular(dx)?;
    let w = l.solve_lower_triangular(&w.transpose())?;
    let w = (&w + w.transpose()) * 0.5;
    let lmin = w.symmetric_eigenvalues().min();
    Some(if lmin < 0.0 { -1.0 / lmin } else { f64::INFINITY })
}

/// Cholesky of the Schur matrix with a small diagonal boost on failure.
fn factor(mut m: DMatrix<f64>, dim: usize) -> Option<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    if dim == 0 {
        return nalgebra::Cholesky::new(DMatrix::identity(1, 1));
    }
    let scale = (0..dim).fold(0.0, |a: f64, k| a.max(m[(k, k)].abs())).max(1e-300);
    let mut boost = 0.0;
    for _ in 0..4 {
        if let Some(c) = m.clone().cholesky() {
            return Some(c);
        }
        let next = if boost == 0.0 { 1e-14 * scale } else { boost * 100.0 };
        for k in 0..dim {
            m[(k, k)] += next - boost;
        }
        boost = next;
    }
    None
}
