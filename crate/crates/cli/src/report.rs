//! Report payloads. Every number is exact: rationals are strings `p/q`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report<P> {
    pub schema_version: String,
    pub command: String,
    pub payload: P,
    pub warnings: Vec<String>,
}

impl<P> Report<P> {
    pub fn new(command: &str, payload: P, warnings: Vec<String>) -> Self {
        Report { schema_version: SCHEMA_VERSION.to_string(), command: command.to_string(), payload, warnings }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub schema_version: String,
    pub command: String,
    pub error: ErrorBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibreRow {
    pub place: String,
    pub degree: usize,
    #[serde(rename = "type")]
    pub kodaira: String,
    pub m: u32,
    pub e: u32,
    pub group: String,
    pub root: Option<String>,
    pub split: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Szpiro {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePayload {
    pub model: String,
    pub minimal_model: String,
    pub discriminant: String,
    pub j_invariant: String,
    pub chi: u32,
    pub euler: u32,
    pub classification: String,
    pub fibres: Vec<FibreRow>,
    pub conductor: u32,
    pub trivial_rank: u32,
    pub b2: u32,
    pub h11: u32,
    pub pg: u32,
    pub isotrivial: bool,
    pub szpiro: Option<Szpiro>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionRow {
    pub name: String,
    pub x: String,
    pub y: String,
    pub height: String,
    #[serde(rename = "contact_O")]
    pub contact_o: u64,
    pub components: BTreeMap<String, String>,
    pub contributions: BTreeMap<String, String>,
    pub torsion: bool,
    pub narrow: bool,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightPayload {
    pub sections: Vec<SectionRow>,
    pub gram: Vec<Vec<String>>,
    pub ns_disc: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramPayload {
    pub sections: Vec<String>,
    pub gram: Vec<Vec<String>>,
    pub det: String,
    pub ns_disc: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeMapPayload {
    pub input: String,
    pub parameter: String,
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscFormRow {
    pub orders: Vec<u64>,
    pub values: Vec<String>,
    pub linkings: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePayload {
    pub rank: usize,
    pub det: String,
    pub even: bool,
    pub invariant_factors: Vec<u64>,
    pub disc_form: Option<DiscFormRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneRow {
    pub contact: u32,
    pub labels: Vec<String>,
    pub height: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigPayload {
    pub configuration: String,
    pub euler: u32,
    #[serde(rename = "rank_T")]
    pub rank_t: u32,
    pub disc_product: u64,
    pub torsion_admissible: Vec<u64>,
    pub extremal_group: Option<String>,
    pub rank1_unimodular: Option<bool>,
    pub rank1_witness: Option<RankOneRow>,
    pub dessin: String,
    pub k3_length: Option<String>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub configuration: String,
    pub group: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationPayload {
    pub rows: Vec<ClassificationRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DessinPayload {
    pub configuration: String,
    pub degree: u32,
    pub found: bool,
    pub sigma0: Option<String>,
    pub sigma1: Option<String>,
    pub sigma_inf: Option<String>,
    pub taus: Vec<String>,
}

/// Plain-text rendering for `--format text`.
pub trait Render {
    fn render(&self) -> String;
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    out += &line(widths.iter().map(|w| "-".repeat(*w)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

fn matrix(m: &[Vec<String>]) -> String {
    m.iter().map(|r| format!("  [{}]\n", r.join(", "))).collect()
}

impl Render for SurfacePayload {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model          {}", self.model);
        let _ = writeln!(out, "minimal model  {}", self.minimal_model);
        let _ = writeln!(out, "discriminant   {}", self.discriminant);
        let _ = writeln!(out, "j-invariant    {}", self.j_invariant);
        let _ = writeln!(out, "chi {}  e {}  {} surface", self.chi, self.euler, self.classification);
        let _ = writeln!(out, "trivial lattice rank {}  conductor degree {}", self.trivial_rank, self.conductor);
        out.push('\n');
        let rows: Vec<Vec<String>> = self.fibres.iter().map(FibreRow::cells).collect();
        out += &table(&FibreRow::HEADER, &rows);
        out
    }
}

impl Render for HeightPayload {
    fn render(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .sections
            .iter()
            .map(|s| {
                let comps: Vec<String> = s.components.iter().map(|(p, l)| format!("{l}@{p}")).collect();
                vec![
                    s.name.clone(),
                    s.height.clone(),
                    s.contact_o.to_string(),
                    if comps.is_empty() { "-".into() } else { comps.join(", ") },
                    s.torsion.to_string(),
                ]
            })
            .collect();
        let mut out = table(&["section", "height", "P.O", "components", "torsion"], &rows);
        if !self.gram.is_empty() {
            out += "\ngram\n";
            out += &matrix(&self.gram);
        }
        if let Some(d) = &self.ns_disc {
            let _ = writeln!(out, "disc NS = {d}");
        }
        out
    }
}

impl Render for GramPayload {
    fn render(&self) -> String {
        let mut out = format!("sections {}\n", self.sections.join(", "));
        out += &matrix(&self.gram);
        let _ = writeln!(out, "det = {}", self.det);
        if let Some(d) = &self.ns_disc {
            let _ = writeln!(out, "disc NS = {d}");
        }
        out
    }
}

impl Render for TypeMapPayload {
    fn render(&self) -> String {
        format!("{} -> {} ({})\n", self.input, self.output, self.parameter)
    }
}

impl Render for LatticePayload {
    fn render(&self) -> String {
        let mut out = format!("rank {}  det {}  even {}\n", self.rank, self.det, self.even);
        let _ = writeln!(out, "invariant factors {:?}", self.invariant_factors);
        if let Some(f) = &self.disc_form {
            let _ = writeln!(out, "generator orders {:?}", f.orders);
            let _ = writeln!(out, "q values {}", f.values.join(", "));
            out += "linkings\n";
            out += &matrix(&f.linkings);
        }
        out
    }
}

impl Render for ConfigPayload {
    fn render(&self) -> String {
        let opt = |o: &Option<String>| o.clone().unwrap_or_else(|| "-".into());
        let rows = vec![
            vec!["euler".into(), self.euler.to_string()],
            vec!["rank_T".into(), self.rank_t.to_string()],
            vec!["disc_product".into(), self.disc_product.to_string()],
            vec!["torsion admissible".into(), format!("{:?}", self.torsion_admissible)],
            vec!["extremal group".into(), opt(&self.extremal_group)],
            vec!["rank one unimodular".into(), self.rank1_unimodular.map_or("-".into(), |b| b.to_string())],
            vec!["dessin".into(), self.dessin.clone()],
            vec!["K3 length".into(), opt(&self.k3_length)],
            vec!["verdict".into(), self.verdict.clone()],
        ];
        format!("{}\n{}", self.configuration, table(&["invariant", "value"], &rows))
    }
}

impl Render for ClassificationPayload {
    fn render(&self) -> String {
        let rows: Vec<Vec<String>> =
            self.rows.iter().map(|r| vec![r.configuration.clone(), r.group.clone()]).collect();
        table(&["configuration", "MW"], &rows)
    }
}

impl Render for DessinPayload {
    fn render(&self) -> String {
        if !self.found {
            return format!("{}: no monodromy tuple of degree {}\n", self.configuration, self.degree);
        }
        let mut out = format!("{}: degree {}\n", self.configuration, self.degree);
        let show = |o: &Option<String>| o.clone().unwrap_or_default();
        let _ = writeln!(out, "sigma0   {}", show(&self.sigma0));
        let _ = writeln!(out, "sigma1   {}", show(&self.sigma1));
        let _ = writeln!(out, "sigmaInf {}", show(&self.sigma_inf));
        for t in &self.taus {
            let _ = writeln!(out, "tau      {t}");
        }
        out
    }
}

impl FibreRow {
    const HEADER: [&'static str; 8] = ["place", "deg", "type", "m", "e", "G(F)", "root", "split"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.place.clone(),
            self.degree.to_string(),
            self.kodaira.clone(),
            self.m.to_string(),
            self.e.to_string(),
            self.group.clone(),
            self.root.clone().unwrap_or_else(|| "-".into()),
            self.split.clone(),
        ]
    }
}

impl Render for FibreRow {
    fn render(&self) -> String {
        table(&Self::HEADER, &[self.cells()])
    }
}
