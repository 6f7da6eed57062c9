use serde::Serialize;

use kpartite_core::mum::MumParameters;
use kpartite_core::skew::SParameter;

use crate::args::Format;

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct Parameters {
    pub d: Option<usize>,
    #[serde(rename = "N")]
    pub num_sites: Option<usize>,
    pub t: Option<f64>,
    pub kappa: Option<f64>,
    pub s: Option<SParameter>,
}

impl Parameters {
    pub fn from_mum(mum: MumParameters) -> Self {
        Self { d: Some(mum.d), t: Some(mum.t), kappa: Some(mum.kappa), ..Self::default() }
    }

    pub fn sites(mut self, n: usize) -> Self {
        self.num_sites = Some(n);
        self
    }

    pub fn s(mut self, s: SParameter) -> Self {
        self.s = Some(s);
        self
    }
}

#[derive(Serialize)]
struct Conventions {
    lhs: &'static str,
    collective_observable: &'static str,
    skew_information: &'static str,
    noise: &'static str,
    site_order: &'static str,
    verdict_tolerance: f64,
}

const CONVENTIONS: Conventions = Conventions {
    lhs: "sum over b = 0..d and n = 0..d-1 of I^s(rho, P_{N,n}^(b)), added in lexicographic (b, n) order",
    collective_observable: "P_{N,n}^(b) = sum over sites i of P_n^(b) acting on site i",
    skew_information: "I^s(rho, A) = sum over l != l' of [lambda_l - f_s(lambda_l, lambda_l')] |<l|A|l'>|^2; \
                       eigenvalues below 1e-12 count as 0",
    noise: "rho(p) = p |psi><psi| + (1 - p) I / D",
    site_order: "site 0 is the leftmost tensor factor",
    verdict_tolerance: kpartite_core::criteria::VERDICT_TOL,
};

#[derive(Serialize)]
struct Envelope<'a, T> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    parameters: Parameters,
    conventions: &'static Conventions,
    result: &'a T,
}

/// A rendered command result.
pub struct Report {
    json: String,
    text: String,
    csv: String,
    /// Set when a numerical check failed; the report is still written.
    pub failure: Option<String>,
}

impl Report {
    pub fn new<T: Serialize>(command: &str, parameters: Parameters, result: &T, text: String, csv: String) -> Self {
        let envelope = Envelope {
            tool: "kpartite",
            version: kpartite_core::VERSION,
            command,
            parameters,
            conventions: &CONVENTIONS,
            result,
        };
        let mut json = serde_json::to_string_pretty(&envelope).expect("report serializes");
        json.push('\n');
        Self { json, text, csv, failure: None }
    }

    pub fn failed(mut self, reason: impl Into<String>) -> Self {
        self.failure = Some(reason.into());
        self
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Text => &self.text,
            Format::Json => &self.json,
            Format::Csv => &self.csv,
        }
    }
}
