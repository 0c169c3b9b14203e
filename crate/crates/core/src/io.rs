//! Text formats: graph and certificate JSON, circuit and schedule text.
//!
//! Complex numbers are written as `re,im` with 17 significant digits, which
//! round-trips every `f64` exactly.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::analyzer::{Analysis, Condition, ProbeStatus, UniversalityCertificate};
use crate::compiler::{
    Encoding, GateKind, ItemKind, LogicalCircuit, LogicalGate, PhysicalSchedule, Provenance, ScheduleItem, Slot, Strategy,
};
use crate::error::{Error, Result};
use crate::gate::{c, TwoQubitGate, C64};
use crate::graph::{build_family, GraphFamily, InteractionGraph, Role};
use crate::state::GateApplication;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn format_complex(z: C64) -> String {
    format!("{:.16e},{:.16e}", z.re, z.im)
}

pub fn parse_complex(s: &str) -> Option<C64> {
    let (re, im) = s.split_once(',')?;
    let (re, im) = (re.trim().parse::<f64>().ok()?, im.trim().parse::<f64>().ok()?);
    (re.is_finite() && im.is_finite()).then(|| c(re, im))
}

// ---------------------------------------------------------------- graphs

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<[usize; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roles: Option<Vec<String>>,
}

/// Parses family names such as `wheel(8)` or `chain_with_pendant(9,1)`.
pub fn parse_family(s: &str) -> Result<GraphFamily> {
    let bad = || Error::Validation(format!("cannot parse graph family '{s}'"));
    let s = s.trim();
    let (name, rest) = s.split_once('(').ok_or_else(bad)?;
    let args: Vec<usize> = rest
        .strip_suffix(')')
        .ok_or_else(bad)?
        .split(',')
        .map(|a| a.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let one = |f: fn(usize) -> GraphFamily| if args.len() == 1 { Ok(f(args[0])) } else { Err(bad()) };
    match (name.trim(), args.len()) {
        ("chain", _) => one(GraphFamily::Chain),
        ("triangular_ladder", _) => one(GraphFamily::TriangularLadder),
        ("hair_comb", _) => one(GraphFamily::HairComb),
        ("cycle", _) => one(GraphFamily::Cycle),
        ("star", _) => one(GraphFamily::Star),
        ("wheel", _) => one(GraphFamily::Wheel),
        ("complete_binary_tree", _) => one(GraphFamily::CompleteBinaryTree),
        ("cycle_with_pendant", 2) => Ok(GraphFamily::CycleWithPendant { n: args[0], attach: args[1] }),
        ("chain_with_pendant", 2) => Ok(GraphFamily::ChainWithPendant { n: args[0], attach: args[1] }),
        ("square_lattice", 2) => Ok(GraphFamily::SquareLattice { width: args[0], height: args[1] }),
        _ => Err(bad()),
    }
}

/// Graph JSON: `{"n": .., "edges": [[u, v], ..], "roles": [..]}` or
/// `{"family": "wheel(8)", "roles": [..]}`.
pub fn parse_graph(text: &str) -> Result<InteractionGraph> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let g = match (&file.family, file.n, &file.edges) {
        (Some(f), None, None) => build_family(parse_family(f)?)?,
        (None, Some(n), Some(edges)) => InteractionGraph::new(n, edges.iter().map(|e| (e[0], e[1])))?,
        _ => return Err(parse_err(1, "graph needs either 'family' or both 'n' and 'edges'")),
    };
    match file.roles {
        Some(roles) => g.with_roles(roles.iter().map(|r| Role::parse(r)).collect::<Result<_>>()?),
        None => Ok(g),
    }
}

pub fn format_graph(g: &InteractionGraph) -> String {
    let file = GraphFile {
        family: None,
        n: Some(g.vertex_count()),
        edges: Some(g.edges().map(|(u, v)| [u, v]).collect()),
        roles: g.has_roles().then(|| g.roles().iter().map(|r| r.as_str().to_string()).collect()),
    };
    serde_json::to_string_pretty(&file).expect("graph serializes") + "\n"
}

// -------------------------------------------------------------- circuits

fn parse_index(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} '{tok}'")))
}

fn parse_entries<'a>(toks: impl Iterator<Item = &'a str>, count: usize, line: usize) -> Result<Vec<C64>> {
    let out: Vec<C64> = toks
        .map(|t| parse_complex(t).ok_or_else(|| parse_err(line, format!("invalid complex entry '{t}'"))))
        .collect::<Result<_>>()?;
    if out.len() != count {
        return Err(parse_err(line, format!("expected {count} complex entries, found {}", out.len())));
    }
    Ok(out)
}

/// Circuit text: a `qubits k` header, then one gate per line:
/// `RZ q theta`, `H q`, `CZ a b` or `MG a b` with eight `re,im` entries
/// (blocks A then B, row-major). `#` starts a comment.
pub fn parse_circuit(text: &str) -> Result<LogicalCircuit> {
    let mut circuit: Option<LogicalCircuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let head = toks.next().unwrap();
        let Some(circ) = circuit.as_mut() else {
            if head != "qubits" {
                return Err(parse_err(line, "expected header 'qubits k'"));
            }
            let k = parse_index(toks.next(), line, "qubit count")?;
            if toks.next().is_some() {
                return Err(parse_err(line, "trailing tokens after qubit count"));
            }
            circuit = Some(LogicalCircuit::new(k).map_err(|e| parse_err(line, e.to_string()))?);
            continue;
        };
        let gate = match head.to_ascii_uppercase().as_str() {
            "RZ" => {
                let q = parse_index(toks.next(), line, "qubit")?;
                let t = toks.next().ok_or_else(|| parse_err(line, "missing angle"))?;
                let theta = t.parse::<f64>().map_err(|_| parse_err(line, format!("invalid angle '{t}'")))?;
                LogicalGate::Rz { q, theta }
            }
            "H" => LogicalGate::H { q: parse_index(toks.next(), line, "qubit")? },
            "CZ" => LogicalGate::Cz { a: parse_index(toks.next(), line, "qubit")?, b: parse_index(toks.next(), line, "qubit")? },
            "MG" => {
                let a = parse_index(toks.next(), line, "qubit")?;
                let b = parse_index(toks.next(), line, "qubit")?;
                let e = parse_entries(toks.by_ref(), 8, line)?;
                let ma = Matrix2::new(e[0], e[1], e[2], e[3]);
                let mb = Matrix2::new(e[4], e[5], e[6], e[7]);
                let gate = TwoQubitGate::from_blocks(ma, mb).map_err(|e| parse_err(line, e.to_string()))?;
                LogicalGate::Mg { gate, a, b }
            }
            other => return Err(parse_err(line, format!("unknown gate '{other}'"))),
        };
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
        circ.push(gate).map_err(|e| parse_err(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| parse_err(1, "missing header 'qubits k'"))
}

pub fn format_circuit(circuit: &LogicalCircuit) -> String {
    let mut out = format!("qubits {}\n", circuit.qubit_count());
    for g in circuit.gates() {
        let line = match g {
            LogicalGate::Rz { q, theta } => format!("RZ {q} {theta:.16e}"),
            LogicalGate::H { q } => format!("H {q}"),
            LogicalGate::Cz { a, b } => format!("CZ {a} {b}"),
            LogicalGate::Mg { gate, a, b } => {
                let blocks = gate.blocks().expect("logical matchgates carry their blocks");
                let entries: Vec<String> = [blocks.even.matrix(), blocks.odd.matrix()]
                    .iter()
                    .flat_map(|m| [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
                    .map(format_complex)
                    .collect();
                format!("MG {a} {b} {}", entries.join(" "))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

// ------------------------------------------------------------- schedules

const SCHEDULE_MAGIC: &str = "matchgeo-schedule 1";

fn slot_token(s: &Slot) -> String {
    match s {
        Slot::Qubit(q) => format!("q{q}"),
        Slot::Zero => "z".into(),
        Slot::Plus => "p".into(),
        Slot::Idle => "-".into(),
    }
}

fn parse_slot(t: &str, line: usize) -> Result<Slot> {
    match t {
        "z" => Ok(Slot::Zero),
        "p" => Ok(Slot::Plus),
        "-" => Ok(Slot::Idle),
        _ => t
            .strip_prefix('q')
            .and_then(|q| q.parse().ok())
            .map(Slot::Qubit)
            .ok_or_else(|| parse_err(line, format!("invalid slot '{t}'"))),
    }
}

fn format_tag(t: &Provenance) -> String {
    let step = match t.step {
        Some((i, k)) => format!("{i}:{}", k.as_str()),
        None => "-".into(),
    };
    format!("tag={}:{}/{step}/{}", t.gate, t.gate_kind.as_str(), t.kind.as_str())
}

fn parse_tag(s: &str, line: usize) -> Result<Provenance> {
    let bad = || parse_err(line, format!("invalid tag '{s}'"));
    let body = s.strip_prefix("tag=").ok_or_else(bad)?;
    let parts: Vec<&str> = body.split('/').collect();
    let [gate, step, kind] = parts[..] else { return Err(bad()) };
    let indexed = |p: &str| -> Result<(usize, GateKind)> {
        let (i, k) = p.split_once(':').ok_or_else(bad)?;
        Ok((i.parse().map_err(|_| bad())?, GateKind::parse(k).ok_or_else(bad)?))
    };
    let (gate, gate_kind) = indexed(gate)?;
    let step = if step == "-" { None } else { Some(indexed(step)?) };
    Ok(Provenance { gate, gate_kind, step, kind: ItemKind::parse(kind).ok_or_else(bad)? })
}

/// Line-oriented schedule: header lines, then one `G u v <16 entries> tag=..` per gate.
pub fn format_schedule(s: &PhysicalSchedule) -> String {
    let g = &s.graph;
    let mut out = String::new();
    out.push_str(SCHEDULE_MAGIC);
    out.push('\n');
    out.push_str(&format!("graph {}\n", g.fingerprint()));
    out.push_str(&format!("vertices {}\n", g.vertex_count()));
    let edges: Vec<String> = g.edges().map(|(u, v)| format!("{u}-{v}")).collect();
    out.push_str(&format!("edges {}\n", edges.join(" ")));
    if g.has_roles() {
        let roles: Vec<&str> = g.roles().iter().map(|r| r.as_str()).collect();
        out.push_str(&format!("roles {}\n", roles.join(" ")));
    }
    out.push_str(&format!("strategy {}\n", s.strategy.as_str()));
    out.push_str(&format!("qubits {}\n", s.logical_qubits));
    out.push_str(&format!("logical_gates {}\n", s.logical_gates));
    out.push_str(&format!("nn_model {}\n", s.nearest_neighbor_model));
    let enc = match s.encoding {
        Encoding::Single => "single",
        Encoding::Pair => "pair",
    };
    out.push_str(&format!("encoding {enc}\n"));
    let slots = |v: &[Slot]| v.iter().map(slot_token).collect::<Vec<_>>().join(" ");
    out.push_str(&format!("initial {}\n", slots(&s.initial)));
    out.push_str(&format!("final {}\n", slots(&s.final_layout)));
    for item in &s.items {
        let entries: Vec<String> = item.app.gate.entries_row_major().iter().map(|z| format_complex(*z)).collect();
        let (u, v) = item.app.pair;
        out.push_str(&format!("G {u} {v} {} {}\n", entries.join(" "), format_tag(&item.tag)));
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<PhysicalSchedule> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match lines.next() {
        Some((_, SCHEDULE_MAGIC)) => {}
        Some((line, _)) => return Err(parse_err(line, format!("expected '{SCHEDULE_MAGIC}'"))),
        None => return Err(parse_err(1, "empty schedule")),
    }
    let mut header = std::collections::BTreeMap::new();
    let mut items = Vec::new();
    let mut graph: Option<InteractionGraph> = None;
    for (line, l) in lines {
        let (key, rest) = l.split_once(' ').unwrap_or((l, ""));
        if key != "G" {
            if !items.is_empty() {
                return Err(parse_err(line, "header line after gate lines"));
            }
            if header.insert(key.to_string(), (line, rest.to_string())).is_some() {
                return Err(parse_err(line, format!("duplicate header '{key}'")));
            }
            continue;
        }
        if graph.is_none() {
            graph = Some(schedule_graph(&header)?);
        }
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if toks.len() != 19 {
            return Err(parse_err(line, format!("gate line needs 19 fields, found {}", toks.len())));
        }
        let u = parse_index(Some(toks[0]), line, "vertex")?;
        let v = parse_index(Some(toks[1]), line, "vertex")?;
        let e = parse_entries(toks[2..18].iter().copied(), 16, line)?;
        let gate = TwoQubitGate::from_matrix_unchecked(nalgebra::Matrix4::from_fn(|r, col| e[4 * r + col]));
        let app = GateApplication::new(gate, u, v).map_err(|e| parse_err(line, e.to_string()))?;
        let n = graph.as_ref().unwrap().vertex_count();
        if u >= n || v >= n {
            return Err(parse_err(line, format!("vertex out of range for n={n}")));
        }
        items.push(ScheduleItem { app, tag: parse_tag(toks[18], line)? });
    }
    let graph = match graph {
        Some(g) => g,
        None => schedule_graph(&header)?,
    };
    let get = |key: &str| header.get(key).ok_or_else(|| parse_err(1, format!("missing header '{key}'")));
    let number = |key: &str| -> Result<usize> {
        let (line, v) = get(key)?;
        v.trim().parse().map_err(|_| parse_err(*line, format!("invalid {key}")))
    };
    let (sl, st) = get("strategy")?;
    let strategy = Strategy::parse(st).map_err(|e| parse_err(*sl, e.to_string()))?;
    let (nl, nn) = get("nn_model")?;
    let nearest_neighbor_model = nn.trim().parse().map_err(|_| parse_err(*nl, "nn_model must be true or false"))?;
    let (el, enc) = get("encoding")?;
    let encoding = match enc.trim() {
        "single" => Encoding::Single,
        "pair" => Encoding::Pair,
        _ => return Err(parse_err(*el, "encoding must be single or pair")),
    };
    let slots = |key: &str| -> Result<Vec<Slot>> {
        let (line, v) = get(key)?;
        let s: Vec<Slot> = v.split_whitespace().map(|t| parse_slot(t, *line)).collect::<Result<_>>()?;
        if s.len() != graph.vertex_count() {
            return Err(parse_err(*line, format!("{key} has {} slots for {} vertices", s.len(), graph.vertex_count())));
        }
        Ok(s)
    };
    let schedule = PhysicalSchedule {
        strategy,
        logical_qubits: number("qubits")?,
        logical_gates: number("logical_gates")?,
        nearest_neighbor_model,
        encoding,
        initial: slots("initial")?,
        final_layout: slots("final")?,
        items,
        graph,
    };
    for (i, item) in schedule.items.iter().enumerate() {
        let (u, v) = item.app.pair;
        if !schedule.graph.has_edge(u, v) {
            return Err(Error::Topology(format!("gate {i} acts on ({u},{v}), which is not an edge")));
        }
    }
    Ok(schedule)
}

type Header = std::collections::BTreeMap<String, (usize, String)>;

fn schedule_graph(header: &Header) -> Result<InteractionGraph> {
    let get = |key: &str| header.get(key).ok_or_else(|| parse_err(1, format!("missing header '{key}'")));
    let (vl, n) = get("vertices")?;
    let n: usize = n.trim().parse().map_err(|_| parse_err(*vl, "invalid vertex count"))?;
    let (el, edges) = get("edges")?;
    let edges: Vec<(usize, usize)> = edges
        .split_whitespace()
        .map(|e| {
            let (u, v) = e.split_once('-').ok_or_else(|| parse_err(*el, format!("invalid edge '{e}'")))?;
            Ok((
                u.parse().map_err(|_| parse_err(*el, format!("invalid edge '{e}'")))?,
                v.parse().map_err(|_| parse_err(*el, format!("invalid edge '{e}'")))?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut g = InteractionGraph::new(n, edges).map_err(|e| parse_err(*el, e.to_string()))?;
    if let Some((rl, roles)) = header.get("roles") {
        let roles = roles.split_whitespace().map(Role::parse).collect::<Result<Vec<_>>>().map_err(|e| parse_err(*rl, e.to_string()))?;
        g = g.with_roles(roles).map_err(|e| parse_err(*rl, e.to_string()))?;
    }
    let (hl, hash) = get("graph")?;
    if hash.trim() != g.fingerprint() {
        return Err(parse_err(*hl, "graph hash does not match the vertices and edges"));
    }
    Ok(g)
}

// ---------------------------------------------------------- certificates

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    condition: String,
    witness: Vec<usize>,
    roles: Vec<String>,
    overhead: String,
    strategy: String,
    probe: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisFile {
    k: usize,
    verdict: String,
    certificates: Vec<CertificateFile>,
}

fn certificate_file(c: &UniversalityCertificate) -> CertificateFile {
    CertificateFile {
        condition: c.condition.as_str().into(),
        witness: c.witness.clone(),
        roles: c.roles.iter().map(|r| r.as_str().to_string()).collect(),
        overhead: c.overhead.clone(),
        strategy: c.strategy.as_str().into(),
        probe: match c.probe {
            ProbeStatus::Verified => "verified",
            ProbeStatus::Unverifiable => "unverifiable",
        }
        .into(),
    }
}

/// Analysis as JSON; each certificate's roles use the graph file's role names.
pub fn format_analysis(a: &Analysis) -> String {
    let verdict = match a.verdict() {
        crate::analyzer::Verdict::Certified => "certified",
        crate::analyzer::Verdict::NoCertificate => "no certificate found",
        crate::analyzer::Verdict::Unknown => "unknown (budget exhausted)",
    };
    let file = AnalysisFile { k: a.k, verdict: verdict.into(), certificates: a.certificates.iter().map(certificate_file).collect() };
    serde_json::to_string_pretty(&file).expect("analysis serializes") + "\n"
}

pub fn parse_certificate(text: &str) -> Result<UniversalityCertificate> {
    let f: CertificateFile = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    Ok(UniversalityCertificate {
        condition: Condition::parse(&f.condition)?,
        witness: f.witness,
        roles: f.roles.iter().map(|r| Role::parse(r)).collect::<Result<_>>()?,
        overhead: f.overhead,
        strategy: Strategy::parse(&f.strategy)?,
        probe: match f.probe.as_str() {
            "verified" => ProbeStatus::Verified,
            "unverifiable" => ProbeStatus::Unverifiable,
            other => return Err(Error::Validation(format!("unknown probe status '{other}'"))),
        },
    })
}

pub fn format_certificate(c: &UniversalityCertificate) -> String {
    serde_json::to_string_pretty(&certificate_file(c)).expect("certificate serializes") + "\n"
}
