//! Reading networks from Pajek, edge-list, and interaction-matrix text, and
//! writing reports.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complexity::{ComplexityReport, MaResult};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::neutral::NullModelRun;

/// Bijection between node indices and external labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a label for the next node index. Fails if the label is taken.
    pub fn push(&mut self, label: &str) -> Result<usize> {
        if self.index.contains_key(label) {
            return Err(Error::InvalidArgument(format!("duplicate label {label:?}")));
        }
        let id = self.labels.len();
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        Ok(id)
    }

    fn get_or_insert(&mut self, label: &str) -> usize {
        match self.index.get(label) {
            Some(&id) => id,
            None => self.push(label).expect("absent label"),
        }
    }

    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels.get(node).map(String::as_str)
    }

    pub fn node(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels `0..n` by their decimal index.
    pub fn numeric(n: usize) -> Self {
        let mut t = LabelTable::new();
        for i in 0..n {
            t.push(&i.to_string()).expect("distinct numbers");
        }
        t
    }
}

fn parse_weight(token: Option<&str>, line: usize) -> Result<f64> {
    match token {
        None => Ok(1.0),
        Some(t) => {
            let w: f64 = t
                .parse()
                .map_err(|_| Error::parse(line, format!("bad weight {t:?}")))?;
            if w > 0.0 && w.is_finite() {
                Ok(w)
            } else {
                Err(Error::parse(line, format!("link weight must be positive, got {t}")))
            }
        }
    }
}

struct RawLink {
    source: usize,
    target: usize,
    weight: f64,
    line: usize,
    // Undirected entries from a Pajek *Edges section.
    edge: bool,
}

fn build(n: usize, directed: bool, raw: &[RawLink]) -> Result<Network> {
    let loops = raw.iter().any(|r| r.source == r.target);
    let mut net = Network::new(n, directed, loops)?;
    for r in raw {
        let add = |net: &mut Network, u: usize, v: usize| {
            net.add_link(u, v, r.weight).map_err(|e| Error::parse(r.line, e.to_string()))
        };
        add(&mut net, r.source, r.target)?;
        if directed && r.edge && r.source != r.target {
            add(&mut net, r.target, r.source)?;
        }
    }
    Ok(net)
}

// Splits a Pajek vertex line into index and optional label.
fn vertex_line(text: &str, line: usize) -> Result<(usize, Option<String>)> {
    let text = text.trim();
    let (idx, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let idx: usize = idx
        .parse()
        .map_err(|_| Error::parse(line, format!("bad vertex index {idx:?}")))?;
    let rest = rest.trim_start();
    let label = if let Some(quoted) = rest.strip_prefix('"') {
        let end = quoted
            .find('"')
            .ok_or_else(|| Error::parse(line, "unterminated vertex label"))?;
        Some(quoted[..end].to_owned())
    } else {
        rest.split_whitespace().next().map(str::to_owned)
    };
    Ok((idx, label))
}

#[derive(PartialEq)]
enum Section {
    Preamble,
    Vertices,
    Arcs,
    Edges,
}

/// Parses the `*Vertices` / `*Arcs` / `*Edges` subset of the Pajek format.
///
/// The network is directed when any `*Arcs` section is present; `*Edges`
/// entries then become reciprocal arcs. Any self-loop line enables the
/// self-loop policy.
pub fn parse_pajek(text: &str) -> Result<(Network, LabelTable)> {
    let mut section = Section::Preamble;
    let mut n: Option<usize> = None;
    let mut names: Vec<Option<String>> = Vec::new();
    let mut raw: Vec<RawLink> = Vec::new();
    let mut directed = false;

    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let t = full.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if let Some(head) = t.strip_prefix('*') {
            let mut words = head.split_whitespace();
            let keyword = words.next().unwrap_or("").to_ascii_lowercase();
            match keyword.as_str() {
                "network" => {}
                "vertices" => {
                    if n.is_some() {
                        return Err(Error::parse(line, "second *Vertices section"));
                    }
                    let count = words
                        .next()
                        .and_then(|w| w.parse::<usize>().ok())
                        .ok_or_else(|| Error::parse(line, "*Vertices needs a node count"))?;
                    n = Some(count);
                    names = vec![None; count];
                    section = Section::Vertices;
                }
                "arcs" | "edges" => {
                    if n.is_none() {
                        return Err(Error::parse(line, "links before *Vertices"));
                    }
                    if keyword == "arcs" {
                        directed = true;
                        section = Section::Arcs;
                    } else {
                        section = Section::Edges;
                    }
                }
                other => {
                    return Err(Error::parse(
                        line,
                        format!("unsupported Pajek section *{other}"),
                    ))
                }
            }
            continue;
        }
        match section {
            Section::Preamble => {
                return Err(Error::parse(line, "expected a *Vertices header"));
            }
            Section::Vertices => {
                let count = n.unwrap_or(0);
                let (idx, label) = vertex_line(t, line)?;
                if idx == 0 || idx > count {
                    return Err(Error::parse(line, format!("vertex {idx} out of range 1..={count}")));
                }
                names[idx - 1] = label;
            }
            Section::Arcs | Section::Edges => {
                let count = n.unwrap_or(0);
                let mut tokens = t.split_whitespace();
                let mut endpoint = || -> Result<usize> {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| Error::parse(line, "link line needs two endpoints"))?;
                    let idx: usize = tok
                        .parse()
                        .map_err(|_| Error::parse(line, format!("bad node index {tok:?}")))?;
                    if idx == 0 || idx > count {
                        return Err(Error::parse(line, format!("node {idx} out of range 1..={count}")));
                    }
                    Ok(idx - 1)
                };
                let source = endpoint()?;
                let target = endpoint()?;
                let weight = parse_weight(tokens.next(), line)?;
                raw.push(RawLink {
                    source,
                    target,
                    weight,
                    line,
                    edge: section == Section::Edges,
                });
            }
        }
    }
    let n = n.ok_or_else(|| Error::parse(text.lines().count().max(1), "missing *Vertices header"))?;
    if n == 0 {
        return Err(Error::parse(1, "network has no nodes"));
    }
    let mut labels = LabelTable::new();
    for (i, name) in names.iter().enumerate() {
        let label = name.clone().unwrap_or_else(|| (i + 1).to_string());
        labels.push(&label).map_err(|e| Error::parse(0, e.to_string()))?;
    }
    Ok((build(n, directed, &raw)?, labels))
}

/// Parses whitespace-separated `source target [weight]` lines. Labels are
/// numbered in order of first appearance and `#` starts a comment.
///
/// A `# nodes: N` comment pads the network with unlinked nodes up to `N`.
pub fn parse_edgelist(text: &str, directed: bool) -> Result<(Network, LabelTable)> {
    let mut labels = LabelTable::new();
    let mut raw = Vec::new();
    let mut declared: Option<(usize, usize)> = None;
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let (body, comment) = match full.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (full, None),
        };
        if let Some(c) = comment {
            if let Some(v) = c.trim().strip_prefix("nodes:") {
                let count = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad node count {:?}", v.trim())))?;
                declared = Some((count, line));
            }
        }
        let mut tokens = body.split_whitespace();
        let Some(a) = tokens.next() else { continue };
        let b = tokens
            .next()
            .ok_or_else(|| Error::parse(line, "link line needs two endpoints"))?;
        let weight = parse_weight(tokens.next(), line)?;
        if let Some(extra) = tokens.next() {
            return Err(Error::parse(line, format!("unexpected token {extra:?}")));
        }
        let source = labels.get_or_insert(a);
        let target = labels.get_or_insert(b);
        raw.push(RawLink {
            source,
            target,
            weight,
            line,
            edge: false,
        });
    }
    if let Some((count, line)) = declared {
        if count < labels.len() {
            return Err(Error::parse(
                line,
                format!("declared {count} nodes but {} are linked", labels.len()),
            ));
        }
        let mut next = 0usize;
        while labels.len() < count {
            let candidate = next.to_string();
            next += 1;
            if labels.node(&candidate).is_none() {
                labels.push(&candidate)?;
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::parse(1, "no nodes"));
    }
    Ok((build(labels.len(), directed, &raw)?, labels))
}

/// Writes an edge list that [`parse_edgelist`] reads back to the same
/// network, including unlinked nodes.
pub fn write_edgelist(net: &Network, labels: Option<&LabelTable>) -> String {
    let name = |v: usize| match labels.and_then(|t| t.label(v)) {
        Some(l) => l.to_owned(),
        None => v.to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "# nodes: {}", net.node_count());
    let _ = writeln!(out, "# directed: {}", net.is_directed());
    for l in net.sorted_links() {
        let _ = writeln!(out, "{} {} {}", name(l.source), name(l.target), l.weight);
    }
    out
}

/// Signed species interaction strengths and growth rates.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionMatrix {
    beta: Vec<Vec<f64>>,
    growth: Vec<f64>,
}

impl InteractionMatrix {
    pub fn new(beta: Vec<Vec<f64>>, growth: Vec<f64>) -> Result<Self> {
        let n = beta.len();
        if n == 0 {
            return Err(Error::NoNodes);
        }
        if beta.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidArgument("interaction matrix is not square".into()));
        }
        if growth.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{} growth rates for {n} species",
                growth.len()
            )));
        }
        if beta.iter().flatten().chain(&growth).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        Ok(InteractionMatrix { beta, growth })
    }

    /// Matrix with zero growth rates.
    pub fn from_beta(beta: Vec<Vec<f64>>) -> Result<Self> {
        let n = beta.len();
        InteractionMatrix::new(beta, vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    pub fn beta(&self, i: usize, j: usize) -> f64 {
        self.beta[i][j]
    }

    pub fn growth_rates(&self) -> &[f64] {
        &self.growth
    }

    pub fn transposed(&self) -> InteractionMatrix {
        let n = self.len();
        let beta = (0..n).map(|i| (0..n).map(|j| self.beta[j][i]).collect()).collect();
        InteractionMatrix {
            beta,
            growth: self.growth.clone(),
        }
    }
}

/// Parses rows of whitespace-separated numbers. An optional line starting
/// with `r:` carries the growth rates; `#` starts a comment.
pub fn parse_matrix(text: &str) -> Result<InteractionMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut growth: Option<Vec<f64>> = None;
    let mut width: Option<(usize, usize)> = None;
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let body = full.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (is_growth, body) = match body.strip_prefix("r:") {
            Some(rest) => (true, rest),
            None => (false, body),
        };
        let values = body
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::parse(line, format!("bad number {t:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if is_growth {
            growth = Some(values);
            continue;
        }
        match width {
            Some((w, _)) if w != values.len() => {
                return Err(Error::parse(line, format!("row has {} entries, expected {w}", values.len())))
            }
            None => width = Some((values.len(), line)),
            _ => {}
        }
        rows.push(values);
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::parse(1, "empty matrix"));
    }
    if rows[0].len() != n {
        return Err(Error::parse(
            width.map_or(1, |w| w.1),
            format!("matrix is {n}x{}, not square", rows[0].len()),
        ));
    }
    let growth = growth.unwrap_or_else(|| vec![0.0; n]);
    InteractionMatrix::new(rows, growth).map_err(|e| Error::parse(1, e.to_string()))
}

/// Direction of the single link for a pair whose interactions have opposite
/// signs: resource flows from the species with the negative coefficient to
/// the one with the positive coefficient. `(a, b)` has `β_ab > 0 > β_ba`.
fn opposite_sign_link(a: usize, b: usize) -> (usize, usize) {
    (b, a)
}

/// Converts an interaction matrix to a positive-weight food web by moving
/// every negative coefficient onto its transpose with the sign flipped.
///
/// Per unordered pair `{i, j}`:
/// * both non-negative: each positive `β_ij` gives a link `i → j` of that
///   weight;
/// * both non-positive: each negative `β_ij` gives a link `j → i` of weight
///   `|β_ij|`;
/// * opposite signs: one link of weight `|β_ij| + |β_ji|`, see
///   [`opposite_sign_link`] for its direction.
///
/// The diagonal is ignored.
pub fn matrix_to_foodweb(m: &InteractionMatrix) -> Network {
    let n = m.len();
    let mut net = Network::new(n, true, false).expect("non-empty matrix");
    let mut add = |u: usize, v: usize, w: f64| {
        net.add_link(u, v, w).expect("each ordered pair is produced once");
    };
    for i in 0..n {
        for j in i + 1..n {
            let (bij, bji) = (m.beta[i][j], m.beta[j][i]);
            if bij >= 0.0 && bji >= 0.0 {
                if bij > 0.0 {
                    add(i, j, bij);
                }
                if bji > 0.0 {
                    add(j, i, bji);
                }
            } else if bij <= 0.0 && bji <= 0.0 {
                if bij < 0.0 {
                    add(j, i, -bij);
                }
                if bji < 0.0 {
                    add(i, j, -bji);
                }
            } else {
                let (a, b) = if bij > 0.0 { (i, j) } else { (j, i) };
                let (u, v) = opposite_sign_link(a, b);
                add(u, v, bij.abs() + bji.abs());
            }
        }
    }
    net
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

fn serialize_sigma<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

fn deserialize_sigma<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Sigma {
        Number(f64),
        Text(String),
    }
    match Sigma::deserialize(d)? {
        Sigma::Number(x) => Ok(x),
        Sigma::Text(t) if t == "inf" => Ok(f64::INFINITY),
        Sigma::Text(t) => Err(serde::de::Error::custom(format!("bad sigma {t:?}"))),
    }
}

/// One network's null-model comparison: the six table columns (nodes,
/// links, C, e^⟨ln C⟩, surplus, sigma) plus ensemble details.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub nodes: usize,
    pub links: usize,
    pub complexity: f64,
    pub geometric_mean_c: f64,
    pub surplus: f64,
    #[serde(serialize_with = "serialize_sigma", deserialize_with = "deserialize_sigma")]
    pub sigma: f64,
    pub samples: usize,
    pub mean_ln_c: f64,
    pub std_ln_c: f64,
    pub replicas_exceeding: usize,
    pub ln_c_values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<ComplexityReport>,
    /// `(C, density)` points of the fitted log-normal, for plotting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<Vec<(f64, f64)>>,
}

impl Report {
    pub fn from_run(run: &NullModelRun, structure: Option<ComplexityReport>) -> Self {
        Report {
            nodes: run.nodes,
            links: run.links,
            complexity: run.significance.c_real,
            geometric_mean_c: run.stats.geometric_mean_c,
            surplus: run.significance.surplus,
            sigma: run.significance.sigma,
            samples: run.stats.samples,
            mean_ln_c: run.stats.mean_ln_c,
            std_ln_c: run.stats.std_ln_c,
            replicas_exceeding: run.replicas_exceeding,
            ln_c_values: run.stats.ln_c_values.clone(),
            structure,
            density: None,
        }
    }
}

const TSV_COLUMNS: [&str; 11] = [
    "nodes",
    "links",
    "complexity",
    "geometric_mean_c",
    "surplus",
    "sigma",
    "samples",
    "mean_ln_c",
    "std_ln_c",
    "replicas_exceeding",
    "ln_c_values",
];

fn fmt_f64(x: f64) -> String {
    if x.is_infinite() && x > 0.0 {
        "inf".to_owned()
    } else {
        x.to_string()
    }
}

pub fn write_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let values = [
                report.nodes.to_string(),
                report.links.to_string(),
                fmt_f64(report.complexity),
                fmt_f64(report.geometric_mean_c),
                fmt_f64(report.surplus),
                fmt_f64(report.sigma),
                report.samples.to_string(),
                fmt_f64(report.mean_ln_c),
                fmt_f64(report.std_ln_c),
                report.replicas_exceeding.to_string(),
                report.ln_c_values.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(","),
            ];
            format!("{}\n{}\n", TSV_COLUMNS.join("\t"), values.join("\t"))
        }
    }
}

/// Reads back the summary written by [`write_report`] in TSV form.
pub fn parse_report_tsv(text: &str) -> Result<Report> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, "empty report"))?;
    if header.split('\t').collect::<Vec<_>>() != TSV_COLUMNS {
        return Err(Error::parse(1, "unexpected report header"));
    }
    let row: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing report row"))?
        .split('\t')
        .collect();
    if row.len() != TSV_COLUMNS.len() {
        return Err(Error::parse(2, "wrong number of report fields"));
    }
    let float = |i: usize| -> Result<f64> {
        row[i]
            .parse::<f64>()
            .map_err(|_| Error::parse(2, format!("bad {} {:?}", TSV_COLUMNS[i], row[i])))
    };
    let int = |i: usize| -> Result<usize> {
        row[i]
            .parse::<usize>()
            .map_err(|_| Error::parse(2, format!("bad {} {:?}", TSV_COLUMNS[i], row[i])))
    };
    let ln_c_values = if row[10].is_empty() {
        Vec::new()
    } else {
        row[10]
            .split(',')
            .map(|t| t.parse::<f64>().map_err(|_| Error::parse(2, format!("bad ln C {t:?}"))))
            .collect::<Result<_>>()?
    };
    Ok(Report {
        nodes: int(0)?,
        links: int(1)?,
        complexity: float(2)?,
        geometric_mean_c: float(3)?,
        surplus: float(4)?,
        sigma: float(5)?,
        samples: int(6)?,
        mean_ln_c: float(7)?,
        std_ln_c: float(8)?,
        replicas_exceeding: int(9)?,
        ln_c_values,
        structure: None,
        density: None,
    })
}

/// Measures of a single network, as emitted by the `complexity` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    /// Headline value: the weighted integral when weights are used, the
    /// structural complexity otherwise.
    pub complexity_bits: f64,
    pub weighted: bool,
    pub structure: ComplexityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weighted_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub medium_articulation: Option<MaResult>,
}

pub fn write_measures(report: &MeasureReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let s = &report.structure;
            let opt = |x: Option<f64>| x.map_or_else(String::new, fmt_f64);
            let ma = report.medium_articulation;
            let header = [
                "nodes",
                "links",
                "complexity_bits",
                "weighted",
                "prefix_bits",
                "log2_omega_linklists",
                "log2_renumberings",
                "total_bits",
                "ceil_variant",
                "labelled_variant",
                "weighted_bits",
                "ma",
                "ma_mutual_information",
                "ma_entropy",
            ];
            let values = [
                s.nodes.to_string(),
                s.links.to_string(),
                fmt_f64(report.complexity_bits),
                report.weighted.to_string(),
                s.prefix_bits.to_string(),
                fmt_f64(s.log2_omega_linklists),
                fmt_f64(s.log2_renumberings),
                fmt_f64(s.total_bits),
                s.ceil_variant.to_string(),
                s.labelled_variant.to_string(),
                opt(report.weighted_bits),
                opt(ma.map(|m| m.ma)),
                opt(ma.map(|m| m.mutual_information)),
                opt(ma.map(|m| m.entropy)),
            ];
            format!("{}\n{}\n", header.join("\t"), values.join("\t"))
        }
    }
}
