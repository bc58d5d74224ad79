//! Command-line front end for `ellpos-core`.
//!
//! [`run`] executes a parsed [`Cli`] against an [`SEvaluator`] and writes
//! the resulting document. The evaluator is a trait so tests can swap in a
//! deliberately broken implementation and check the exit-status contract.

use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ellpos_core::cohen_lenstra::{self, to_decimal, TruncatedMeasure};
use ellpos_core::oracle::{
    amalgam_check, amalgam_sweep, enumerate_subgroups, hall_trivialyes_check, ConcreteGroup, OracleCaps,
};
use ellpos_core::poset::parse_parts;
use ellpos_core::{
    aut_count, chain_weight, enumerate_chains, enumerate_interval, inj_count, s_chain, sub_count, surj_count,
    verify_theorems, ChainGuard, Ell, Error, GroupClass, MobiusTable, SEntry, VerifyOptions,
};
use serde_json::{json, Map, Value};

pub mod exit {
    pub const OK: u8 = 0;
    /// Counterexamples found, evaluators disagree, or an internal error.
    pub const FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const RESOURCE_GUARD: u8 = 3;
}

#[derive(Debug, Parser)]
#[command(
    name = "ellpos",
    version,
    about = "Exact S(A, C), subgroup counts and Cohen–Lenstra moments for finite abelian ℓ-groups"
)]
pub struct Cli {
    /// Output format; defaults to text for single counts and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Chain,
    Conv,
    Both,
}

#[derive(Debug, Args)]
pub struct Prime {
    /// Odd prime ℓ.
    #[arg(long, value_parser = parse_ell)]
    pub ell: Ell,
}

/// A partition such as `[2,1]`; `[]` is the trivial group.
type Parts = Vec<u32>;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of subgroups of C isomorphic to A.
    Sub {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "c", visible_alias = "b", value_parser = parse_partition)]
        c: Parts,
    },
    /// Number of injective homomorphisms A ↪ B.
    Inj {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "b", value_parser = parse_partition)]
        b: Parts,
    },
    /// Order of Aut(A).
    Aut {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
    },
    /// Number of surjective homomorphisms B ↠ A.
    Surj {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "b", value_parser = parse_partition)]
        b: Parts,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
    },
    /// The Möbius-type function S(A, C).
    S {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "c", value_parser = parse_partition)]
        c: Parts,
        #[arg(long, value_enum, default_value = "conv")]
        method: MethodArg,
    },
    /// Every class B with A ≤ B ≤ C.
    Interval {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "c", value_parser = parse_partition)]
        c: Parts,
    },
    /// Every A-chain ending at C, with its signed weight.
    Chains {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "c", value_parser = parse_partition)]
        c: Parts,
    },
    /// Möbius function μ(H, G) of the subgroup lattice of a concrete group.
    Mu {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "g", value_parser = parse_partition)]
        g: Parts,
        /// Include the covering relation of the lattice.
        #[arg(long)]
        covers: bool,
        #[arg(long, default_value_t = OracleCaps::DEFAULT_MAX_ORDER)]
        max_group_order: usize,
    },
    /// Compare S(A, C) with the lattice sum of μ(B, C) over B ≅ A.
    Amalgam {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "c", value_parser = parse_partition)]
        c: Parts,
        #[arg(long, default_value_t = OracleCaps::DEFAULT_MAX_ORDER)]
        max_group_order: usize,
    },
    /// Sweep the vanishing and factorisation theorems for S.
    Verify {
        #[command(flatten)]
        prime: Prime,
        #[arg(long)]
        max_order_exp: u32,
        /// Also run the lattice oracle sweeps (amalgam identity, Hall values).
        #[arg(long)]
        oracle: bool,
        /// Skip the chain-sum cross-check.
        #[arg(long)]
        no_compare: bool,
        #[arg(long, default_value_t = OracleCaps::DEFAULT_MAX_ORDER)]
        max_group_order: usize,
    },
    /// Cohen–Lenstra weight ν(A).
    ClNu {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long, default_value_t = cohen_lenstra::DEFAULT_PRODUCT_TERMS)]
        terms: u32,
        #[arg(long, default_value_t = cohen_lenstra::DEFAULT_PRECISION)]
        precision: usize,
    },
    /// Partial A-th moment of ν truncated to |B| ≤ ℓ^M.
    ClMoment {
        #[command(flatten)]
        prime: Prime,
        #[arg(long = "a", value_parser = parse_partition)]
        a: Parts,
        #[arg(long = "max-order-exp")]
        max_order_exp: u32,
        #[arg(long, default_value_t = cohen_lenstra::DEFAULT_PRODUCT_TERMS)]
        terms: u32,
        #[arg(long, default_value_t = cohen_lenstra::DEFAULT_PRECISION)]
        precision: usize,
        /// Include the per-class weights.
        #[arg(long)]
        weights: bool,
    },
}

fn parse_ell(text: &str) -> Result<Ell, String> {
    let p: u64 = text.parse().map_err(|_| format!("{text:?} is not an integer"))?;
    Ell::new(p).map_err(|e| e.to_string())
}

fn parse_partition(text: &str) -> Result<Parts, String> {
    parse_parts(text).map_err(|e| e.to_string())
}

/// The two evaluators of S used by `s --method`.
pub trait SEvaluator {
    fn chain(&self, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<SEntry>;
    fn conv(&self, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<SEntry>;
}

/// The library evaluators; the chain guard comes from the environment.
#[derive(Debug, Default)]
pub struct CoreEvaluator;

impl SEvaluator for CoreEvaluator {
    fn chain(&self, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<SEntry> {
        s_chain(a, c, &ChainGuard::from_env())
    }

    fn conv(&self, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<SEntry> {
        MobiusTable::new(a.ell()).s_conv(a, c)
    }
}

/// An emitted document: the JSON form, plus which array (if any) holds the
/// rows for CSV and text output, plus a bare scalar for text output.
#[derive(Debug, Clone)]
pub struct Document {
    pub body: Map<String, Value>,
    pub rows: Option<&'static str>,
    pub scalar: Option<String>,
    /// Printed to the diagnostic stream after the document.
    pub diagnostic: Option<String>,
    /// Exit status once the document is written.
    pub status: u8,
}

impl Document {
    fn new(body: Value) -> Self {
        let Value::Object(body) = body else { unreachable!("documents are objects") };
        Document { body, rows: None, scalar: None, diagnostic: None, status: exit::OK }
    }

    fn rows(mut self, key: &'static str) -> Self {
        self.rows = Some(key);
        self
    }

    fn scalar(mut self, text: impl Into<String>) -> Self {
        self.scalar = Some(text.into());
        self
    }

    fn status(mut self, status: u8) -> Self {
        self.status = status;
        self
    }

    fn diagnostic(mut self, message: Option<String>) -> Self {
        self.diagnostic = message;
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.body)?;
                writeln!(out)
            }
            Format::Csv => self.write_csv(out),
            Format::Text => self.write_text(out),
        }
    }

    /// Flat records: the row array if there is one, otherwise the body.
    fn records(&self) -> Vec<Map<String, Value>> {
        match self.rows.and_then(|k| self.body.get(k)) {
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Object(m) => m.clone(),
                    other => Map::from_iter([("value".to_owned(), other.clone())]),
                })
                .collect(),
            _ => vec![self.body.clone()],
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let records = self.records();
        let mut writer = csv::Writer::from_writer(out);
        let header: Vec<String> = match records.first() {
            Some(first) => first.keys().cloned().collect(),
            None => vec!["value".to_owned()],
        };
        writer.write_record(&header)?;
        for record in &records {
            writer.write_record(header.iter().map(|k| cell(record.get(k))))?;
        }
        writer.flush()
    }

    fn write_text(&self, out: &mut dyn Write) -> io::Result<()> {
        if let Some(s) = &self.scalar {
            return writeln!(out, "{s}");
        }
        for (key, value) in &self.body {
            if Some(key.as_str()) == self.rows {
                continue;
            }
            writeln!(out, "{key}: {}", cell(Some(value)))?;
        }
        if self.rows.is_some() {
            for record in self.records() {
                let fields: Vec<String> = record.iter().map(|(k, v)| format!("{k}={}", cell(Some(v)))).collect();
                writeln!(out, "{}", fields.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Strings are written bare; everything else as compact JSON.
fn cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

impl Command {
    fn default_format(&self) -> Format {
        match self {
            Command::Sub { .. } | Command::Inj { .. } | Command::Aut { .. } | Command::Surj { .. } => Format::Text,
            _ => Format::Json,
        }
    }
}

/// Maps a library error to an exit status.
pub fn error_status(err: &Error) -> u8 {
    match err {
        e if e.is_resource_guard() => exit::RESOURCE_GUARD,
        Error::Internal(_) => exit::FAILURE,
        _ => exit::USAGE,
    }
}

/// Runs one command, writing the document to `out` and diagnostics to
/// `err`. Returns the process exit status.
pub fn run(cli: &Cli, evaluator: &dyn SEvaluator, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let format = cli.format.unwrap_or_else(|| cli.command.default_format());
    let doc = match execute(&cli.command, evaluator) {
        Ok(doc) => doc,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return error_status(&e);
        }
    };
    match doc.write(format, out) {
        Ok(()) => {
            if let Some(message) = &doc.diagnostic {
                let _ = writeln!(err, "{message}");
            }
            if doc.status == exit::FAILURE {
                let _ = writeln!(err, "FAILED: see the document above");
            }
            doc.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: cannot write output: {e}");
            exit::FAILURE
        }
    }
}

fn class(prime: &Prime, parts: &Parts) -> GroupClass {
    GroupClass::new(prime.ell, parts.iter().copied())
}

fn count_doc(op: &str, ell: Ell, fields: &[(&str, &GroupClass)], value: impl ToString) -> Document {
    let mut body = Map::new();
    body.insert("op".into(), json!(op));
    body.insert("ell".into(), json!(ell.get()));
    for (k, v) in fields {
        body.insert((*k).into(), json!(v.to_string()));
    }
    let value = value.to_string();
    body.insert("value".into(), json!(value));
    Document::new(Value::Object(body)).scalar(value)
}

fn require_embedding(a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<()> {
    if a.embeds(c)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{a} does not embed in {c}")))
    }
}

fn execute(command: &Command, evaluator: &dyn SEvaluator) -> ellpos_core::Result<Document> {
    Ok(match command {
        Command::Sub { prime, a, c } => {
            let (a, c) = (class(prime, a), class(prime, c));
            count_doc("sub", prime.ell, &[("a", &a), ("c", &c)], sub_count(&a, &c)?)
        }
        Command::Inj { prime, a, b } => {
            let (a, b) = (class(prime, a), class(prime, b));
            count_doc("inj", prime.ell, &[("a", &a), ("b", &b)], inj_count(&a, &b)?)
        }
        Command::Aut { prime, a } => {
            let a = class(prime, a);
            count_doc("aut", prime.ell, &[("a", &a)], aut_count(&a))
        }
        Command::Surj { prime, b, a } => {
            let (a, b) = (class(prime, a), class(prime, b));
            count_doc("surj", prime.ell, &[("b", &b), ("a", &a)], surj_count(&b, &a)?)
        }
        Command::S { prime, a, c, method } => s_document(evaluator, &class(prime, a), &class(prime, c), *method)?,
        Command::Interval { prime, a, c } => {
            let (a, c) = (class(prime, a), class(prime, c));
            require_embedding(&a, &c)?;
            let interval = enumerate_interval(&a, &c)?;
            let members: Vec<Value> = interval.members().iter().map(|b| json!({ "class": b.to_string() })).collect();
            Document::new(json!({
                "ell": prime.ell.get(),
                "a": a.to_string(),
                "c": c.to_string(),
                "len": members.len(),
                "members": members,
            }))
            .rows("members")
        }
        Command::Chains { prime, a, c } => chains_document(prime.ell, &class(prime, a), &class(prime, c))?,
        Command::Mu { prime, g, covers, max_group_order } => {
            let shape = class(prime, g);
            let caps = OracleCaps::new(*max_group_order)?;
            let lattice = enumerate_subgroups(&ConcreteGroup::new(&shape, &caps)?)?;
            let column = lattice.mu_column(lattice.top());
            let subgroups: Vec<Value> = lattice
                .subgroups()
                .iter()
                .enumerate()
                .map(|(id, h)| {
                    json!({
                        "id": id,
                        "order": h.order(),
                        "iso_type": h.iso_type().to_string(),
                        "mu": column[id].to_string(),
                    })
                })
                .collect();
            let mut body = json!({
                "ell": prime.ell.get(),
                "group": shape.to_string(),
                "subgroup_count": subgroups.len(),
                "mu_trivial": column[lattice.bottom()].to_string(),
                "subgroups": subgroups,
            });
            if *covers {
                body["covers"] = json!(lattice.covers());
            }
            Document::new(body).rows("subgroups")
        }
        Command::Amalgam { prime, a, c, max_group_order } => {
            let (a, c) = (class(prime, a), class(prime, c));
            let caps = OracleCaps::new(*max_group_order)?;
            let check = amalgam_check(&a, &c, &caps, &MobiusTable::new(prime.ell))?;
            let status = if check.holds { exit::OK } else { exit::FAILURE };
            Document::new(to_value(&check)).status(status)
        }
        Command::Verify { prime, max_order_exp, oracle, no_compare, max_group_order } => {
            let options = VerifyOptions { compare_methods: !no_compare, guard: ChainGuard::from_env() };
            let report = verify_theorems(prime.ell, *max_order_exp, options)?;
            let mut passed = report.passed();
            let mut body = to_value(&report);
            if *oracle {
                let caps = OracleCaps::new(*max_group_order)?;
                let amalgam = amalgam_sweep(prime.ell, *max_order_exp, &caps)?;
                let hall = hall_trivialyes_check(prime.ell, *max_order_exp, &caps)?;
                passed &= amalgam.failures.is_empty() && hall.passed();
                body["oracle"] = json!({ "amalgam": to_value(&amalgam), "hall": to_value(&hall) });
            }
            let status = if passed { exit::OK } else { exit::FAILURE };
            Document::new(body).rows("counterexamples").status(status)
        }
        Command::ClNu { prime, a, terms, precision } => {
            let a = class(prime, a);
            let nu = cohen_lenstra::nu(&a, *terms, *precision)?;
            let digits = cohen_lenstra::decimal_digits(*precision);
            Document::new(json!({
                "ell": prime.ell.get(),
                "a": a.to_string(),
                "N": nu.product_terms,
                "precision": nu.precision,
                "value": to_decimal(&nu.value, digits),
                "lower_bound": to_decimal(&nu.lower_bound, digits),
            }))
        }
        Command::ClMoment { prime, a, max_order_exp, terms, precision, weights } => {
            let a = class(prime, a);
            let measure = TruncatedMeasure::cohen_lenstra(prime.ell, *max_order_exp, *terms, *precision)?;
            let moment = measure.moment(&a)?;
            let digits = cohen_lenstra::decimal_digits(*precision);
            let mut body = json!({
                "ell": prime.ell.get(),
                "a": a.to_string(),
                "M": moment.support_bound,
                "N": terms,
                "precision": precision,
                "moment": to_decimal(&moment.value, digits),
                "total_mass": to_decimal(&measure.total_mass(), digits),
            });
            if *weights {
                let dump = measure.dump();
                body["weights"] = dump
                    .weights
                    .into_iter()
                    .map(|(class, weight)| json!({ "class": class, "weight": weight }))
                    .collect();
                return Ok(Document::new(body).rows("weights"));
            }
            Document::new(body)
        }
    })
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialise to JSON")
}

fn s_document(
    evaluator: &dyn SEvaluator,
    a: &GroupClass,
    c: &GroupClass,
    method: MethodArg,
) -> ellpos_core::Result<Document> {
    let mut body = json!({ "ell": a.ell().get(), "a": a.to_string(), "c": c.to_string() });
    let mut diagnostic = None;
    let (value, status) = match method {
        MethodArg::Chain => {
            let entry = evaluator.chain(a, c)?;
            body["method"] = json!("chain");
            body["chains"] = json!(entry.chain_count);
            (entry.value, exit::OK)
        }
        MethodArg::Conv => {
            let entry = evaluator.conv(a, c)?;
            body["method"] = json!("conv");
            (entry.value, exit::OK)
        }
        MethodArg::Both => {
            let conv = evaluator.conv(a, c)?;
            let chain = evaluator.chain(a, c)?;
            let agree = conv.value == chain.value;
            body["method"] = json!("both");
            body["chains"] = json!(chain.chain_count);
            body["chain_value"] = json!(chain.value.to_string());
            body["conv_value"] = json!(conv.value.to_string());
            body["methods_agree"] = json!(agree);
            if !agree {
                diagnostic = Some(format!(
                    "INTERNAL ERROR: S({a}, {c}) differs between evaluators: chain sum {} vs convolution {}",
                    chain.value, conv.value
                ));
            }
            (conv.value, if agree { exit::OK } else { exit::FAILURE })
        }
    };
    let text = value.to_string();
    body["value"] = json!(text);
    Ok(Document::new(body).scalar(text).status(status).diagnostic(diagnostic))
}

fn chains_document(ell: Ell, a: &GroupClass, c: &GroupClass) -> ellpos_core::Result<Document> {
    require_embedding(a, c)?;
    let guard = ChainGuard::from_env();
    let interval = enumerate_interval(a, c)?;
    if interval.open_len() > guard.max_open_interval {
        return Err(Error::ChainBlowup { members: interval.open_len(), limit: guard.max_open_interval });
    }
    let mut total = ellpos_core::BigInt::from(0);
    let mut rows = Vec::new();
    if a != c {
        for chain in enumerate_chains(a, c)? {
            let weight = chain_weight(&chain)?;
            total += &weight;
            let links: Vec<String> = chain.links().iter().map(ToString::to_string).collect();
            rows.push(json!({ "links": links.join(" < "), "weight": weight.to_string() }));
        }
    }
    Ok(Document::new(json!({
        "ell": ell.get(),
        "a": a.to_string(),
        "c": c.to_string(),
        "count": rows.len(),
        "weight_sum": total.to_string(),
        "chains": rows,
    }))
    .rows("chains"))
}
