//! Gram-matrix certificates for the relaxed homomorphisms.
//!
//! A certificate for `G → H` is a PSD matrix `C` of dimension `|V(G)|·|V(H)|`
//! indexed by `(x, s) ↦ x·|V(H)| + s`, written `C[x,s;y,t]` or `C_xyst`.

use serde::{Deserialize, Serialize};

use super::{HomError, HomVariant};
use crate::graph::Graph;
use crate::linalg::SymMatrix;
use crate::theta::ThetaKind;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomCertificate {
    pub variant: HomVariant,
    pub g_size: usize,
    pub h_size: usize,
    pub c: SymMatrix,
}

/// Certificate for the Schrijver comparison `ϑ⁻̄(G) ≤ ϑ⁻̄(H)`. Same layout as
/// [`HomCertificate`] but checked against a different set of conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchrijverCertificate {
    pub g_size: usize,
    pub h_size: usize,
    pub c: SymMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub name: String,
    pub passed: bool,
    /// Largest violation found (0 when none).
    pub worst: f64,
    /// `(x, y, s, t)` of the worst violation, when it is located at an entry.
    pub at: Option<[usize; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tol: f64,
    pub conditions: Vec<ConditionResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.passed)
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.conditions {
            write!(f, "{:<5} {:<28} worst {:.3e}", if c.passed { "ok" } else { "FAIL" }, c.name, c.worst)?;
            if let (false, Some([x, y, s, t])) = (c.passed, c.at) {
                write!(f, " at x={x} y={y} s={s} t={t}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Running maximum of a violation together with where it occurred.
struct Tracker {
    name: &'static str,
    worst: f64,
    at: Option<[usize; 4]>,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Tracker { name, worst: 0.0, at: None }
    }

    fn see(&mut self, v: f64, at: [usize; 4]) {
        if v > self.worst {
            self.worst = v;
            self.at = Some(at);
        }
    }

    fn finish(self, tol: f64) -> ConditionResult {
        ConditionResult {
            name: self.name.to_string(),
            passed: self.worst <= tol,
            worst: self.worst,
            at: self.at,
        }
    }
}

fn check_dims(c: &SymMatrix, g: &Graph, h: &Graph) -> Result<(usize, usize), HomError> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    if c.dim() != ng * nh {
        return Err(HomError::DimensionMismatch(format!(
            "certificate has dimension {}, graphs need {}·{} = {}",
            c.dim(),
            ng,
            nh,
            ng * nh
        )));
    }
    Ok((ng, nh))
}

fn psd_condition(c: &SymMatrix, tol: f64) -> ConditionResult {
    let margin = c.psd_margin();
    ConditionResult {
        name: "positive semidefinite".into(),
        passed: margin >= -tol,
        worst: (-margin).max(0.0),
        at: None,
    }
}

/// Checks the Gram conditions of `variant`:
///
/// - `C ⪰ 0`
/// - `Σ_{s,t} C_xyst = 1` for all `x, y`
/// - `C_xyst = 0` when `x ∼ y` and `s ≁ t`
/// - `C_xxst = 0` for `s ≠ t` (B and V)
/// - `C_xyst ≥ 0` (Plus and V)
pub fn verify_certificate(cert: &HomCertificate, g: &Graph, h: &Graph, tol: f64) -> Result<VerificationReport, HomError> {
    let (ng, nh) = check_dims(&cert.c, g, h)?;
    let c = &cert.c;
    let mut sum = Tracker::new("row-block sums equal 1");
    let mut adj = Tracker::new("zero on x~y, s!~t");
    let mut same = Tracker::new("zero on x=y, s!=t");
    let mut nonneg = Tracker::new("entrywise nonnegative");
    for x in 0..ng {
        for y in x..ng {
            let xy = g.has_edge(x, y);
            let mut total = 0.0;
            for s in 0..nh {
                for t in 0..nh {
                    let v = c.get(x * nh + s, y * nh + t);
                    total += v;
                    let at = [x, y, s, t];
                    if xy && !h.has_edge(s, t) {
                        adj.see(v.abs(), at);
                    }
                    if x == y && s != t {
                        same.see(v.abs(), at);
                    }
                    nonneg.see(-v, at);
                }
            }
            sum.see((total - 1.0).abs(), [x, y, 0, 0]);
        }
    }
    let mut conditions = vec![psd_condition(c, tol), sum.finish(tol), adj.finish(tol)];
    if matches!(cert.variant, HomVariant::B | HomVariant::V) {
        conditions.push(same.finish(tol));
    }
    if matches!(cert.variant, HomVariant::Plus | HomVariant::V) {
        conditions.push(nonneg.finish(tol));
    }
    let passed = conditions.iter().all(|c| c.passed);
    Ok(VerificationReport { tol, conditions, passed })
}

/// The five conditions of the Schrijver comparison:
///
/// - `Σ_{s,t} C_xyst = 1`
/// - `C_xyst = 0` for `s ≁ t`, `s ≠ t`
/// - `C_xyss ≤ 0` for `x ∼ y`
/// - `C_xxst = 0` for `s ≠ t`
/// - `C_xyst ≥ 0` for `s ≠ t`
///
/// plus `C ⪰ 0`.
pub fn verify_schrijver_certificate(
    cert: &SchrijverCertificate,
    g: &Graph,
    h: &Graph,
    tol: f64,
) -> Result<VerificationReport, HomError> {
    let (ng, nh) = check_dims(&cert.c, g, h)?;
    let c = &cert.c;
    let mut sum = Tracker::new("row-block sums equal 1");
    let mut nonadj = Tracker::new("zero on s!~t, s!=t");
    let mut diag = Tracker::new("nonpositive on x~y, s=t");
    let mut same = Tracker::new("zero on x=y, s!=t");
    let mut nonneg = Tracker::new("nonnegative on s!=t");
    for x in 0..ng {
        for y in x..ng {
            let xy = g.has_edge(x, y);
            let mut total = 0.0;
            for s in 0..nh {
                for t in 0..nh {
                    let v = c.get(x * nh + s, y * nh + t);
                    total += v;
                    let at = [x, y, s, t];
                    if s == t {
                        if xy {
                            diag.see(v, at);
                        }
                        continue;
                    }
                    if !h.has_edge(s, t) {
                        nonadj.see(v.abs(), at);
                    }
                    if x == y {
                        same.see(v.abs(), at);
                    }
                    nonneg.see(-v, at);
                }
            }
            sum.see((total - 1.0).abs(), [x, y, 0, 0]);
        }
    }
    let conditions = vec![
        psd_condition(c, tol),
        sum.finish(tol),
        nonadj.finish(tol),
        diag.finish(tol),
        same.finish(tol),
        nonneg.finish(tol),
    ];
    let passed = conditions.iter().all(|c| c.passed);
    Ok(VerificationReport { tol, conditions, passed })
}

/// `C = λ⁻¹ [J ⊗ B + (λ−1)⁻¹ Z ⊗ (λD − B)]` with `D = B ∘ I` and `λ = ⟨B, J⟩`.
///
/// `z` is a min-form matrix for `G` with diagonal `λ − 1` and `b` is of the
/// form `ψψᵀ ∘ (I + T)` for a max-form `T` of `H` with top eigenvector `ψ`.
pub fn assemble(z: &SymMatrix, b: &SymMatrix) -> SymMatrix {
    let (ng, nh) = (z.dim(), b.dim());
    let lambda = b.sum();
    let m = SymMatrix::from_fn(nh, |s, t| if s == t { lambda * b.get(s, s) } else { 0.0 } - b.get(s, t));
    let k = 1.0 / (lambda - 1.0);
    SymMatrix::from_fn(ng * nh, |i, j| {
        let (x, s, y, t) = (i / nh, i % nh, j / nh, j % nh);
        (b.get(s, t) + k * z.get(x, y) * m.get(s, t)) / lambda
    })
}

/// Mass concentrated on one target vertex: `C_xyst = [s = 0][t = 0]`. Valid for
/// every variant when `G` has no edges.
pub(crate) fn degenerate(ng: usize, nh: usize) -> SymMatrix {
    SymMatrix::from_fn(ng * nh, |i, j| if i % nh == 0 && j % nh == 0 { 1.0 } else { 0.0 })
}

/// The 0/1 certificate `C_xyst = [s = f(x)][t = f(y)]` of a homomorphism `f`.
pub fn from_homomorphism(g: &Graph, h: &Graph, f: &[usize], variant: HomVariant) -> Result<HomCertificate, HomError> {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    if f.len() != ng || f.iter().any(|&s| s >= nh) {
        return Err(HomError::DimensionMismatch(format!(
            "map has {} entries for {} vertices into {} targets",
            f.len(),
            ng,
            nh
        )));
    }
    if let Some((x, y)) = g.edges().find(|&(x, y)| !h.has_edge(f[x], f[y])) {
        return Err(HomError::PreconditionFailed(format!(
            "edge {x}-{y} maps to the non-edge {}-{}",
            f[x], f[y]
        )));
    }
    let c = SymMatrix::from_fn(ng * nh, |i, j| {
        let (x, s, y, t) = (i / nh, i % nh, j / nh, j % nh);
        if f[x] == s && f[y] == t { 1.0 } else { 0.0 }
    });
    Ok(HomCertificate {
        variant,
        g_size: ng,
        h_size: nh,
        c,
    })
}

/// `Y_xy = Σ_{s,t} Z_st C_xyst`, the pull-back of a min-form matrix `Z` for `H`
/// along a certificate. The diagonal is then raised to its maximum, which keeps
/// `Y` PSD and makes it feasible for the min form of `G` at the value of `Z`
/// when the certificate and `Z` are of matching kinds.
pub fn construct_y(c: &SymMatrix, g_size: usize, z_h: &SymMatrix) -> Result<SymMatrix, HomError> {
    let nh = z_h.dim();
    if c.dim() != g_size * nh {
        return Err(HomError::DimensionMismatch(format!(
            "certificate dimension {} is not {}·{}",
            c.dim(),
            g_size,
            nh
        )));
    }
    let mut y = SymMatrix::from_fn(g_size, |x, yv| {
        let mut acc = 0.0;
        for s in 0..nh {
            let row = c.row(x * nh + s);
            for t in 0..nh {
                acc += z_h.get(s, t) * row[yv * nh + t];
            }
        }
        acc
    });
    let top = (0..g_size).fold(f64::NEG_INFINITY, |m, x| m.max(y.get(x, x)));
    for x in 0..g_size {
        y.set(x, x, top);
    }
    Ok(y)
}

/// Theta kind of the `G`-side and `H`-side witnesses used to build a certificate.
pub fn witness_kinds(variant: HomVariant) -> (ThetaKind, ThetaKind) {
    match variant {
        HomVariant::B => (ThetaKind::Lovasz, ThetaKind::Lovasz),
        HomVariant::Plus | HomVariant::V => (ThetaKind::Szegedy, ThetaKind::Schrijver),
    }
}

/// Vectors `w_s^x` whose Gram matrix is a certificate, and `w = Σ_s w_s^x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomVectors {
    pub g_size: usize,
    pub h_size: usize,
    /// `vectors[x][s] = w_s^x`.
    pub vectors: Vec<Vec<Vec<f64>>>,
    pub w: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

impl HomVectors {
    pub fn gram(&self) -> SymMatrix {
        let nh = self.h_size;
        SymMatrix::from_fn(self.g_size * nh, |i, j| {
            dot(&self.vectors[i / nh][i % nh], &self.vectors[j / nh][j % nh])
        })
    }

    /// Largest violation of the vector conditions of `variant`: every
    /// `Σ_s w_s^x` equals the unit vector `w`; `⟨w_s^x, w_t^y⟩ = 0` for `x ∼ y`,
    /// `s ≁ t`; `⟨w_s^x, w_t^x⟩ = 0` for `s ≠ t` (B, V); all inner products
    /// nonnegative (Plus, V).
    pub fn violation(&self, g: &Graph, h: &Graph, variant: HomVariant) -> f64 {
        let (ng, nh) = (self.g_size, self.h_size);
        let mut worst = (dot(&self.w, &self.w) - 1.0).abs();
        for x in 0..ng {
            let mut sum = vec![0.0; self.w.len()];
            for v in &self.vectors[x] {
                sum.iter_mut().zip(v).for_each(|(a, b)| *a += b);
            }
            let diff = sum.iter().zip(&self.w).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            worst = worst.max(diff);
            for y in x..ng {
                for s in 0..nh {
                    for t in 0..nh {
                        let ip = dot(&self.vectors[x][s], &self.vectors[y][t]);
                        if g.has_edge(x, y) && !h.has_edge(s, t) {
                            worst = worst.max(ip.abs());
                        }
                        if x == y && s != t && matches!(variant, HomVariant::B | HomVariant::V) {
                            worst = worst.max(ip.abs());
                        }
                        if matches!(variant, HomVariant::Plus | HomVariant::V) {
                            worst = worst.max(-ip);
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Gram vectors of a certificate that passes verification at `tol`.
pub fn extract_vectors(cert: &HomCertificate, g: &Graph, h: &Graph, tol: f64) -> Result<HomVectors, HomError> {
    let report = verify_certificate(cert, g, h, tol)?;
    if !report.passed {
        return Err(HomError::NotVerified(report.to_string()));
    }
    let (ng, nh) = (cert.g_size, cert.h_size);
    let rows = cert.c.gram_factor(tol)?;
    let vectors: Vec<Vec<Vec<f64>>> = (0..ng).map(|x| rows[x * nh..(x + 1) * nh].to_vec()).collect();
    let rank = rows.first().map_or(0, |r| r.len());
    let mut w = vec![0.0; rank];
    for v in &vectors[0] {
        w.iter_mut().zip(v).for_each(|(a, b)| *a += b);
    }
    Ok(HomVectors {
        g_size: ng,
        h_size: nh,
        vectors,
        w,
    })
}

/// On-disk certificate: the lower triangle of `C` in row-major order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub variant: HomVariant,
    pub g_size: usize,
    pub h_size: usize,
    pub dim: usize,
    pub entries: Vec<f64>,
}

impl HomCertificate {
    pub fn to_file(&self) -> CertificateFile {
        let n = self.c.dim();
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            entries.extend_from_slice(&self.c.row(i)[..=i]);
        }
        CertificateFile {
            variant: self.variant,
            g_size: self.g_size,
            h_size: self.h_size,
            dim: n,
            entries,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("certificate serializes")
    }

    /// Decodes a certificate without verifying it.
    pub fn from_file(file: &CertificateFile) -> Result<HomCertificate, HomError> {
        let n = file.dim;
        if n != file.g_size * file.h_size || file.entries.len() != n * (n + 1) / 2 {
            return Err(HomError::Format(format!(
                "dim {} with {} entries does not match sizes {}·{}",
                n,
                file.entries.len(),
                file.g_size,
                file.h_size
            )));
        }
        if file.entries.iter().any(|v| !v.is_finite()) {
            return Err(HomError::Format("non-finite entry".into()));
        }
        let mut c = SymMatrix::zeros(n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                c.set(i, j, file.entries[k]);
                k += 1;
            }
        }
        Ok(HomCertificate {
            variant: file.variant,
            g_size: file.g_size,
            h_size: file.h_size,
            c,
        })
    }

    /// Parses JSON and verifies the certificate against `g` and `h`.
    pub fn from_json(text: &str, g: &Graph, h: &Graph, tol: f64) -> Result<HomCertificate, HomError> {
        let file: CertificateFile = serde_json::from_str(text).map_err(|e| HomError::Format(e.to_string()))?;
        let cert = HomCertificate::from_file(&file)?;
        let report = verify_certificate(&cert, g, h, tol)?;
        if !report.passed {
            return Err(HomError::NotVerified(report.to_string()));
        }
        Ok(cert)
    }
}
