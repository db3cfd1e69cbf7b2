//! Zero-error source-channel coding: the characteristic graph of a source with
//! side information, the distinguishability graph of a channel, and the
//! theta lower bound on the cost rate.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::theta::{self, Form, ThetaError, ThetaKind, ThetaOptions};

/// Allowed deviation of a total probability from 1.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodingError {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("malformed file: {0}")]
    Format(String),
    #[error(transparent)]
    Theta(#[from] ThetaError),
}

fn validation(msg: impl Into<String>) -> CodingError {
    CodingError::Validation(msg.into())
}

/// Sparse table of `(row, column, value)` triples; omitted entries are zero.
fn dense_table(rows: usize, cols: usize, entries: &[(usize, usize, f64)], what: &str) -> Result<Vec<f64>, CodingError> {
    if rows == 0 || cols == 0 {
        return Err(validation(format!("{what}: alphabet sizes must be positive")));
    }
    let mut table = vec![0.0; rows * cols];
    let mut seen = HashSet::new();
    for &(a, b, p) in entries {
        if a >= rows || b >= cols {
            return Err(validation(format!("{what}: entry ({a},{b}) outside {rows}×{cols}")));
        }
        if !seen.insert((a, b)) {
            return Err(validation(format!("{what}: entry ({a},{b}) listed twice")));
        }
        if !p.is_finite() || p < 0.0 {
            return Err(validation(format!("{what}: entry ({a},{b}) = {p} is not a nonnegative number")));
        }
        table[a * cols + b] = p;
    }
    Ok(table)
}

/// Joint distribution `P(x, u)` of Alice's message `x` and Bob's side information `u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DualSourceFile", into = "DualSourceFile")]
pub struct DualSource {
    x_size: usize,
    u_size: usize,
    p: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSourceFile {
    pub x_size: usize,
    pub u_size: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl DualSource {
    pub fn new(x_size: usize, u_size: usize, entries: &[(usize, usize, f64)]) -> Result<Self, CodingError> {
        let p = dense_table(x_size, u_size, entries, "source")?;
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(validation(format!("source: probabilities sum to {total}, not 1")));
        }
        Ok(DualSource { x_size, u_size, p })
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn u_size(&self) -> usize {
        self.u_size
    }

    pub fn prob(&self, x: usize, u: usize) -> f64 {
        self.p[x * self.u_size + u]
    }

    /// Two independent copies: `P((x₁,x₂),(u₁,u₂)) = P₁(x₁,u₁) P₂(x₂,u₂)` with
    /// pairs encoded as `a·|second| + b`.
    pub fn product(&self, other: &DualSource) -> DualSource {
        let (xs, us) = (self.x_size * other.x_size, self.u_size * other.u_size);
        let mut p = vec![0.0; xs * us];
        for x1 in 0..self.x_size {
            for x2 in 0..other.x_size {
                for u1 in 0..self.u_size {
                    for u2 in 0..other.u_size {
                        let x = x1 * other.x_size + x2;
                        let u = u1 * other.u_size + u2;
                        p[x * us + u] = self.prob(x1, u1) * other.prob(x2, u2);
                    }
                }
            }
        }
        DualSource { x_size: xs, u_size: us, p }
    }

    pub fn from_json(text: &str) -> Result<Self, CodingError> {
        serde_json::from_str(text).map_err(|e| CodingError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("source serializes")
    }
}

impl TryFrom<DualSourceFile> for DualSource {
    type Error = CodingError;
    fn try_from(f: DualSourceFile) -> Result<Self, CodingError> {
        DualSource::new(f.x_size, f.u_size, &f.entries)
    }
}

impl From<DualSource> for DualSourceFile {
    fn from(s: DualSource) -> Self {
        let mut entries = Vec::new();
        for x in 0..s.x_size {
            for u in 0..s.u_size {
                let v = s.prob(x, u);
                if v != 0.0 {
                    entries.push((x, u, v));
                }
            }
        }
        DualSourceFile {
            x_size: s.x_size,
            u_size: s.u_size,
            entries,
        }
    }
}

/// Row-stochastic channel `N(v | s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct Channel {
    s_size: usize,
    v_size: usize,
    n: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub s_size: usize,
    pub v_size: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl Channel {
    pub fn new(s_size: usize, v_size: usize, entries: &[(usize, usize, f64)]) -> Result<Self, CodingError> {
        let n = dense_table(s_size, v_size, entries, "channel")?;
        for s in 0..s_size {
            let total: f64 = n[s * v_size..(s + 1) * v_size].iter().sum();
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                return Err(validation(format!("channel: row for input {s} sums to {total}, not 1")));
            }
        }
        Ok(Channel { s_size, v_size, n })
    }

    /// Noiseless channel on `n` symbols.
    pub fn identity(n: usize) -> Channel {
        let entries: Vec<_> = (0..n).map(|s| (s, s, 1.0)).collect();
        Channel::new(n, n, &entries).expect("identity channel is stochastic")
    }

    pub fn s_size(&self) -> usize {
        self.s_size
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn prob(&self, s: usize, v: usize) -> f64 {
        self.n[s * self.v_size + v]
    }

    /// Two parallel uses, inputs and outputs encoded as `a·|second| + b`.
    pub fn parallel(&self, other: &Channel) -> Channel {
        let (ss, vs) = (self.s_size * other.s_size, self.v_size * other.v_size);
        let mut n = vec![0.0; ss * vs];
        for s1 in 0..self.s_size {
            for s2 in 0..other.s_size {
                for v1 in 0..self.v_size {
                    for v2 in 0..other.v_size {
                        let s = s1 * other.s_size + s2;
                        let v = v1 * other.v_size + v2;
                        n[s * vs + v] = self.prob(s1, v1) * other.prob(s2, v2);
                    }
                }
            }
        }
        Channel { s_size: ss, v_size: vs, n }
    }

    pub fn from_json(text: &str) -> Result<Self, CodingError> {
        serde_json::from_str(text).map_err(|e| CodingError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel serializes")
    }
}

impl TryFrom<ChannelFile> for Channel {
    type Error = CodingError;
    fn try_from(f: ChannelFile) -> Result<Self, CodingError> {
        Channel::new(f.s_size, f.v_size, &f.entries)
    }
}

impl From<Channel> for ChannelFile {
    fn from(c: Channel) -> Self {
        let mut entries = Vec::new();
        for s in 0..c.s_size {
            for v in 0..c.v_size {
                let p = c.prob(s, v);
                if p != 0.0 {
                    entries.push((s, v, p));
                }
            }
        }
        ChannelFile {
            s_size: c.s_size,
            v_size: c.v_size,
            entries,
        }
    }
}

/// `x ∼ y` iff `x ≠ y` and `P(x,u) P(y,u) > 0` for some `u`: Bob cannot tell
/// them apart.
pub fn characteristic_graph(src: &DualSource) -> Graph {
    let n = src.x_size;
    let mut edges = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            if (0..src.u_size).any(|u| src.prob(x, u) > 0.0 && src.prob(y, u) > 0.0) {
                edges.push((x, y));
            }
        }
    }
    Graph::from_edges(n, edges).expect("edges are distinct and in range")
}

/// `s ∼ t` iff `s ≠ t` and no output is reachable from both.
pub fn distinguishability_graph(ch: &Channel) -> Graph {
    let n = ch.s_size;
    let mut edges = Vec::new();
    for s in 0..n {
        for t in (s + 1)..n {
            if (0..ch.v_size).all(|v| !(ch.prob(s, v) > 0.0 && ch.prob(t, v) > 0.0)) {
                edges.push((s, t));
            }
        }
    }
    Graph::from_edges(n, edges).expect("edges are distinct and in range")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Finite(f64),
    /// The channel cannot carry a single zero-error bit.
    Infinite,
}

impl Bound {
    pub fn value(&self) -> f64 {
        match self {
            Bound::Finite(v) => *v,
            Bound::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => f.write_str("+inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_f64(*v),
            Bound::Infinite => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Bound::Finite(v)),
            Raw::Text(t) if t == "+inf" => Ok(Bound::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unexpected bound '{t}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostRateBounds {
    /// `ϑ̄(g)`.
    pub theta_g: f64,
    /// `ϑ̄(h)`.
    pub theta_h: f64,
    pub log_base: f64,
    pub log_theta_g: f64,
    pub log_theta_h: f64,
    /// Lower bound on the cost rate without entanglement.
    pub classical_bound: Bound,
    /// Lower bound on the entanglement-assisted cost rate.
    pub entangled_bound: Bound,
}

/// `log ϑ̄(g) / log ϑ̄(h)` bounds the number of channel uses per source
/// instance, with and without entanglement. Infinite when `ϑ̄(h) = 1`.
pub fn cost_rate_bounds(g: &Graph, h: &Graph, log_base: f64, opts: &ThetaOptions) -> Result<CostRateBounds, CodingError> {
    if !(log_base > 0.0 && log_base != 1.0 && log_base.is_finite()) {
        return Err(validation(format!("log base {log_base} must be positive and not 1")));
    }
    let theta_g = theta::theta_bar(g, ThetaKind::Lovasz, Form::Min, opts)?.value;
    let theta_h = theta::theta_bar(h, ThetaKind::Lovasz, Form::Min, opts)?.value;
    let ln_b = log_base.ln();
    let (lg, lh) = (theta_g.ln() / ln_b, theta_h.ln() / ln_b);
    let bound = if theta_h <= 1.0 + 1e-9 {
        Bound::Infinite
    } else {
        Bound::Finite(lg.max(0.0) / lh)
    };
    Ok(CostRateBounds {
        theta_g,
        theta_h,
        log_base,
        log_theta_g: lg,
        log_theta_h: lh,
        classical_bound: bound,
        entangled_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, make_named, product, NamedFamily, ProductKind};

    fn named(s: &str) -> Graph {
        make_named(&s.parse::<NamedFamily>().unwrap()).unwrap()
    }

    fn typewriter(n: usize) -> Channel {
        let entries: Vec<_> = (0..n).flat_map(|s| [(s, s, 0.5), (s, (s + 1) % n, 0.5)]).collect();
        Channel::new(n, n, &entries).unwrap()
    }

    #[test]
    fn characteristic_graphs() {
        let all: Vec<_> = (0..4).map(|x| (x, 0, 0.25)).collect();
        assert_eq!(characteristic_graph(&DualSource::new(4, 1, &all).unwrap()), named("K:4"));
        let diag: Vec<_> = (0..3).map(|x| (x, x, 1.0 / 3.0)).collect();
        assert!(characteristic_graph(&DualSource::new(3, 3, &diag).unwrap()).is_edgeless());
        let path = DualSource::new(3, 2, &[(0, 0, 0.25), (1, 0, 0.25), (1, 1, 0.25), (2, 1, 0.25)]).unwrap();
        let g = characteristic_graph(&path);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn distinguishability_graphs() {
        assert_eq!(distinguishability_graph(&Channel::identity(4)), named("K:4"));
        let constant = Channel::new(3, 2, &[(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0)]).unwrap();
        assert!(distinguishability_graph(&constant).is_edgeless());
        let h = distinguishability_graph(&typewriter(5));
        assert!(is_isomorphic(&h, &named("C5")).unwrap());
    }

    #[test]
    fn products_match_graph_products() {
        let a = DualSource::new(3, 2, &[(0, 0, 0.25), (1, 0, 0.25), (1, 1, 0.25), (2, 1, 0.25)]).unwrap();
        let b = DualSource::new(2, 2, &[(0, 0, 0.5), (1, 1, 0.25), (0, 1, 0.25)]).unwrap();
        let ga = characteristic_graph(&a);
        let gb = characteristic_graph(&b);
        assert_eq!(characteristic_graph(&a.product(&b)), product(&ga, &gb, ProductKind::Strong).unwrap());

        let ch = typewriter(5);
        let noisy = Channel::new(3, 3, &[(0, 0, 1.0), (1, 0, 0.5), (1, 1, 0.5), (2, 2, 1.0)]).unwrap();
        for (c1, c2) in [(&ch, &ch), (&ch, &noisy), (&noisy, &ch)] {
            let (h1, h2) = (distinguishability_graph(c1), distinguishability_graph(c2));
            assert_eq!(
                distinguishability_graph(&c1.parallel(c2)),
                product(&h1, &h2, ProductKind::Disjunctive).unwrap()
            );
        }
    }

    #[test]
    fn validation_names_the_constraint() {
        let e = DualSource::new(2, 1, &[(0, 0, 0.5), (1, 0, 0.4)]).unwrap_err();
        assert!(e.to_string().contains("sum to"), "{e}");
        let e = Channel::new(2, 2, &[(0, 0, 1.0), (1, 1, 0.5), (1, 0, 0.6)]).unwrap_err();
        assert!(e.to_string().contains("input 1"), "{e}");
        let e = Channel::new(1, 1, &[(0, 0, 1.0), (0, 0, 1.0)]).unwrap_err();
        assert!(e.to_string().contains("twice"), "{e}");
        let e = DualSource::new(1, 1, &[(0, 3, 1.0)]).unwrap_err();
        assert!(e.to_string().contains("outside"), "{e}");
        let e = DualSource::new(2, 1, &[(0, 0, 1.5), (1, 0, -0.5)]).unwrap_err();
        assert!(e.to_string().contains("nonnegative"), "{e}");
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"s_size": 2, "v_size": 2, "entries": [[0, 0, 1.0], [1, 1, 1.0]]}"#;
        let ch = Channel::from_json(text).unwrap();
        assert_eq!(ch, Channel::identity(2));
        assert_eq!(Channel::from_json(&ch.to_json()).unwrap(), ch);
        let bad = r#"{"s_size": 2, "v_size": 2, "entries": [[0, 0, 1.0]]}"#;
        assert!(matches!(Channel::from_json(bad), Err(CodingError::Format(m)) if m.contains("input 1")));
        let src = DualSource::new(2, 1, &[(0, 0, 0.5), (1, 0, 0.5)]).unwrap();
        assert_eq!(DualSource::from_json(&src.to_json()).unwrap(), src);
    }

    #[test]
    fn bounds() {
        let o = ThetaOptions::default();
        let b = cost_rate_bounds(&named("C5"), &named("K:2"), 2.0, &o).unwrap();
        let expect = 5f64.sqrt().log2();
        assert!((b.entangled_bound.value() - expect).abs() < 1e-6);
        assert_eq!(b.classical_bound, b.entangled_bound);
        let b = cost_rate_bounds(&named("K:4"), &named("K:4"), 2.0, &o).unwrap();
        assert!((b.entangled_bound.value() - 1.0).abs() < 1e-6);
        let b = cost_rate_bounds(&named("K:1"), &named("C5"), 2.0, &o).unwrap();
        assert_eq!(b.entangled_bound, Bound::Finite(0.0));
        let b = cost_rate_bounds(&named("C5"), &named("e:3"), 2.0, &o).unwrap();
        assert_eq!(b.entangled_bound, Bound::Infinite);
        assert_eq!(serde_json::to_string(&b.entangled_bound).unwrap(), "\"+inf\"");
        // The ratio does not depend on the base; the logs do.
        let e = cost_rate_bounds(&named("C5"), &named("K:2"), std::f64::consts::E, &o).unwrap();
        assert!((e.entangled_bound.value() - expect).abs() < 1e-6);
        assert!((e.log_theta_h - 2f64.ln()).abs() < 1e-6);
        assert!(cost_rate_bounds(&named("C5"), &named("K:2"), 1.0, &o).is_err());
    }
}
