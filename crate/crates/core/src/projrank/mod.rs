//! Projective representations: rank-`r` projectors in dimension `d`, one per
//! vertex, with orthogonal projectors on adjacent vertices. Such a
//! representation shows that the projective rank of the graph is at most `d/r`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::linalg::SymMatrix;

/// Default tolerance for idempotence, trace and orthogonality.
pub const REP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("representation has {found} projectors, graph has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid representation: {0}")]
    InvalidInput(String),
    #[error("malformed representation file: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveRepresentation {
    pub d: usize,
    pub r: usize,
    pub projectors: Vec<SymMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub passed: bool,
    pub tol: f64,
    /// `d / r`.
    pub ratio: f64,
    /// Largest `‖P² − P‖_F`.
    pub idempotence: f64,
    /// Largest `|Tr P − r|`.
    pub trace: f64,
    /// Largest `‖P_x P_y‖_F` over edges and the edge attaining it.
    pub orthogonality: f64,
    pub worst_edge: Option<(usize, usize)>,
    pub failures: Vec<String>,
}

impl std::fmt::Display for RepresentationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ratio d/r = {}", self.ratio)?;
        writeln!(f, "idempotence {:.3e}, trace {:.3e}, orthogonality {:.3e}", self.idempotence, self.trace, self.orthogonality)?;
        for line in &self.failures {
            writeln!(f, "FAIL {line}")?;
        }
        Ok(())
    }
}

fn matmul(a: &SymMatrix, b: &SymMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        let ai = a.row(i);
        for (k, &aik) in ai.iter().enumerate() {
            if aik == 0.0 {
                continue;
            }
            let bk = b.row(k);
            let row = &mut out[i * n..(i + 1) * n];
            row.iter_mut().zip(bk).for_each(|(o, &v)| *o += aik * v);
        }
    }
    out
}

fn frob(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl ProjectiveRepresentation {
    pub fn ratio(&self) -> f64 {
        self.d as f64 / self.r as f64
    }

    fn check_shape(&self) -> Result<(), RepError> {
        if self.r == 0 || self.d == 0 {
            return Err(RepError::InvalidInput("d and r must be positive".into()));
        }
        if let Some((i, p)) = self.projectors.iter().enumerate().find(|(_, p)| p.dim() != self.d || !p.is_finite()) {
            return Err(RepError::InvalidInput(format!(
                "projector {i} has dimension {} (expected {}) or a non-finite entry",
                p.dim(),
                self.d
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("representation serializes")
    }

    /// Parses and verifies a representation of `g`.
    pub fn from_json(text: &str, g: &Graph, tol: f64) -> Result<ProjectiveRepresentation, RepError> {
        let rep: ProjectiveRepresentation = serde_json::from_str(text).map_err(|e| RepError::Format(e.to_string()))?;
        let report = verify_representation(g, &rep, tol)?;
        if !report.passed {
            return Err(RepError::InvalidInput(report.to_string()));
        }
        Ok(rep)
    }
}

pub fn verify_representation(g: &Graph, rep: &ProjectiveRepresentation, tol: f64) -> Result<RepresentationReport, RepError> {
    let n = g.vertex_count();
    if rep.projectors.len() != n {
        return Err(RepError::SizeMismatch {
            expected: n,
            found: rep.projectors.len(),
        });
    }
    rep.check_shape()?;
    let mut failures = Vec::new();
    let (mut idem, mut trace) = (0.0f64, 0.0f64);
    for (x, p) in rep.projectors.iter().enumerate() {
        let sq = matmul(p, p);
        let e = frob(&sq.iter().zip(p.as_slice()).map(|(a, b)| a - b).collect::<Vec<_>>());
        let t = (p.trace() - rep.r as f64).abs();
        if e > tol {
            failures.push(format!("vertex {x}: ‖P² − P‖ = {e:.3e}"));
        }
        if t > tol {
            failures.push(format!("vertex {x}: trace {} differs from r = {}", p.trace(), rep.r));
        }
        idem = idem.max(e);
        trace = trace.max(t);
    }
    let (mut orth, mut worst_edge) = (0.0f64, None);
    for (x, y) in g.edges() {
        let v = frob(&matmul(&rep.projectors[x], &rep.projectors[y]));
        if v > tol {
            failures.push(format!("edge {x}-{y}: ‖P_x P_y‖ = {v:.3e}"));
        }
        if v > orth || worst_edge.is_none() {
            orth = orth.max(v);
            worst_edge = Some((x, y));
        }
    }
    Ok(RepresentationReport {
        passed: failures.is_empty(),
        tol,
        ratio: rep.ratio(),
        idempotence: idem,
        trace,
        orthogonality: orth,
        worst_edge,
        failures,
    })
}

fn coordinate_projector(d: usize, idx: &[usize]) -> SymMatrix {
    let mut diag = vec![0.0; d];
    for &i in idx {
        diag[i] = 1.0;
    }
    SymMatrix::diagonal(&diag)
}

/// Rank-one coordinate projectors `e_i e_iᵀ` in dimension `n`; valid for `K_n`
/// and every graph on `n` vertices.
pub fn basis_representation(n: usize) -> ProjectiveRepresentation {
    ProjectiveRepresentation {
        d: n,
        r: 1,
        projectors: (0..n).map(|i| coordinate_projector(n, &[i])).collect(),
    }
}

/// `5/2` representation of the pentagon: vertex `i` gets the projector onto
/// `span{e_i, e_{i+2}}` (indices mod 5). Adjacent vertices use disjoint
/// coordinates.
pub fn c5_representation() -> ProjectiveRepresentation {
    ProjectiveRepresentation {
        d: 5,
        r: 2,
        projectors: (0..5).map(|i| coordinate_projector(5, &[i, (i + 2) % 5])).collect(),
    }
}

/// `P_{(x,s)} = P_x ⊗ Q_s`, a `d₁d₂ / r₁r₂` representation of the disjunctive
/// product, with vertices ordered as in the graph products.
pub fn tensor_representation(a: &ProjectiveRepresentation, b: &ProjectiveRepresentation) -> Result<ProjectiveRepresentation, RepError> {
    a.check_shape()?;
    b.check_shape()?;
    let mut projectors = Vec::with_capacity(a.projectors.len() * b.projectors.len());
    for p in &a.projectors {
        for q in &b.projectors {
            projectors.push(p.kron(q));
        }
    }
    Ok(ProjectiveRepresentation {
        d: a.d * b.d,
        r: a.r * b.r,
        projectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_named, product, NamedFamily, ProductKind};

    fn named(s: &str) -> Graph {
        make_named(&s.parse::<NamedFamily>().unwrap()).unwrap()
    }

    #[test]
    fn basis_on_complete_graph() {
        let rep = verify_representation(&named("K:3"), &basis_representation(3), REP_TOL).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.ratio, 3.0);
    }

    #[test]
    fn pentagon_witness() {
        let c5 = named("C5");
        let rep = c5_representation();
        let report = verify_representation(&c5, &rep, REP_TOL).unwrap();
        assert!(report.passed, "{report}");
        assert_eq!(report.ratio, 2.5);
        // Non-adjacent 0 and 2 share e2.
        assert_eq!(frob(&matmul(&rep.projectors[0], &rep.projectors[2])), 1.0);
    }

    #[test]
    fn perturbation_is_named() {
        let c5 = named("C5");
        let mut rep = c5_representation();
        rep.projectors[1].set(0, 1, 1e-3);
        let report = verify_representation(&c5, &rep, REP_TOL).unwrap();
        assert!(!report.passed);
        assert!(report.failures.iter().any(|f| f.contains("edge 0-1")), "{report}");
    }

    #[test]
    fn tensors_on_disjunctive_products() {
        let (c5, k3, k2) = (named("C5"), named("K:3"), named("K:2"));
        let cases = [
            (&c5, c5_representation(), &k3, basis_representation(3), 7.5),
            (&k2, basis_representation(2), &k2, basis_representation(2), 4.0),
            (&c5, c5_representation(), &c5, c5_representation(), 6.25),
        ];
        for (g, a, h, b, ratio) in cases {
            let t = tensor_representation(&a, &b).unwrap();
            for kind in [ProductKind::Disjunctive, ProductKind::Lexicographic] {
                let gh = product(g, h, kind).unwrap();
                let report = verify_representation(&gh, &t, REP_TOL).unwrap();
                assert!(report.passed, "{kind}: {report}");
                assert_eq!(report.ratio, ratio);
            }
        }
        assert_eq!(
            product(&k2, &k2, ProductKind::Disjunctive).unwrap(),
            named("K:4")
        );
    }

    #[test]
    fn size_mismatch_and_json() {
        let c5 = named("C5");
        assert!(matches!(
            verify_representation(&c5, &basis_representation(4), REP_TOL),
            Err(RepError::SizeMismatch { expected: 5, found: 4 })
        ));
        let text = c5_representation().to_json();
        assert_eq!(ProjectiveRepresentation::from_json(&text, &c5, REP_TOL).unwrap(), c5_representation());
        assert!(ProjectiveRepresentation::from_json(&text, &named("K:5"), REP_TOL).is_err());
    }
}
