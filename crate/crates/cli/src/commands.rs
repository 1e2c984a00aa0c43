use std::fmt;

use serde_json::{json, Value};
use stiso_core::iso::{id_process, normalize as iso_normalize, synthesis_derivation, synthesize, AdapterPair, IsoDecision};
use stiso_core::library::{lib_load, LibraryError, Searcher};
use stiso_core::semantics::{decide_correct, equiv_refute, Correctness, Refutation};
use stiso_core::symbolic::{certify_iso_witnesses, Certificate, CertifyFailure, SearchOptions};
use stiso_core::syntax::{parse_expr, parse_process, parse_type, ParseError, Process, SessionType};
use stiso_core::typecheck::{check_process, infer_interfaces, InterfacePair, TypeEnv};

use crate::{GlobalOpts, Kind};

pub const AFFIRMATIVE: u8 = 0;
pub const NEGATIVE: u8 = 1;
pub const BUDGET: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Parse { what: &'static str, text: String, err: ParseError },
    Library(LibraryError),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { what, text, err } => write!(f, "cannot parse {what} `{text}`: {err}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

pub struct Outcome {
    pub code: u8,
    pub text: Vec<String>,
    pub result: Value,
    pub evidence: Vec<String>,
    /// Show the evidence even without `--explain`.
    pub always_explain: bool,
}

impl Outcome {
    fn new(code: u8, text: Vec<String>, result: Value) -> Self {
        Outcome { code, text, result, evidence: Vec::new(), always_explain: false }
    }

    fn with_evidence(mut self, evidence: Vec<String>) -> Self {
        self.evidence = evidence;
        self
    }

    pub fn envelope(&self) -> Value {
        json!({ "ok": self.code == AFFIRMATIVE, "result": self.result, "evidence": self.evidence })
    }
}

fn ty(text: &str) -> Result<SessionType, CliError> {
    parse_type(text).map_err(|err| CliError::Parse { what: "type", text: text.into(), err })
}

fn process(text: &str) -> Result<Process, CliError> {
    parse_process(text).map_err(|err| CliError::Parse { what: "process", text: text.into(), err })
}

fn search_opts(o: &GlobalOpts) -> SearchOptions {
    SearchOptions { max_steps: o.max_steps, max_term_size: o.max_term_size, ..SearchOptions::default() }
}

fn pair_json(p: &AdapterPair) -> Value {
    json!({
        "from": p.from.to_string(),
        "to": p.to.to_string(),
        "forward": p.forward.to_string(),
        "backward": p.backward.to_string(),
    })
}

fn pair_lines(p: &AdapterPair) -> Vec<String> {
    vec![format!("A = {}", p.forward), format!("B = {}", p.backward)]
}

fn not_derivable(t: &SessionType, s: &SessionType, decision: IsoDecision) -> Outcome {
    let IsoDecision::NotDerivable { nf_left, nf_right } = decision else {
        unreachable!("only called on negative decisions")
    };
    Outcome::new(
        NEGATIVE,
        vec![
            "not derivable from a1–a12".into(),
            format!("nf({t}) = {nf_left}"),
            format!("nf({s}) = {nf_right}"),
        ],
        json!({ "derivable": false, "nf_left": nf_left.to_string(), "nf_right": nf_right.to_string() }),
    )
}

fn certificate_evidence(c: &Certificate) -> Vec<String> {
    let mut ev = vec!["typing of A:".to_string()];
    ev.extend(c.typing_forward.render());
    ev.push("typing of B:".into());
    ev.extend(c.typing_backward.render());
    ev.push("A || B:".into());
    ev.extend(c.forward.lines());
    ev.push("B || A:".into());
    ev.extend(c.backward.lines());
    ev
}

fn certify_failure(f: &CertifyFailure) -> Outcome {
    let code = if f.budget_exceeded { BUDGET } else { NEGATIVE };
    Outcome::new(
        code,
        vec![format!("not certified: {f}")],
        json!({ "certified": false, "obligation": f.obligation.to_string(), "reason": f.reason, "budget_exceeded": f.budget_exceeded }),
    )
}

pub fn parse(text: &str, kind: Option<Kind>) -> Result<Outcome, CliError> {
    let printed = match kind {
        Some(Kind::Type) => ("type", ty(text)?.to_string()),
        Some(Kind::Process) => ("process", process(text)?.to_string()),
        Some(Kind::Expr) => (
            "expr",
            parse_expr(text)
                .map_err(|err| CliError::Parse { what: "expression", text: text.into(), err })?
                .to_string(),
        ),
        None => match (parse_type(text), parse_process(text), parse_expr(text)) {
            (Ok(t), _, _) => ("type", t.to_string()),
            (_, Ok(p), _) => ("process", p.to_string()),
            (_, _, Ok(e)) => ("expr", e.to_string()),
            (Err(a), Err(b), Err(c)) => {
                // report the reading that got furthest
                let (what, err) = [("type", a), ("process", b), ("expression", c)]
                    .into_iter()
                    .max_by_key(|(_, e)| (e.line, e.column))
                    .expect("three readings");
                return Err(CliError::Parse { what, text: text.into(), err });
            }
        },
    };
    let (k, s) = printed;
    Ok(Outcome::new(AFFIRMATIVE, vec![s.clone()], json!({ "kind": k, "printed": s })))
}

pub fn dual(text: &str) -> Result<Outcome, CliError> {
    let d = ty(text)?.dual().to_string();
    Ok(Outcome::new(AFFIRMATIVE, vec![d.clone()], json!(d)))
}

pub fn id(text: &str) -> Result<Outcome, CliError> {
    let p = id_process(&ty(text)?).to_string();
    Ok(Outcome::new(AFFIRMATIVE, vec![p.clone()], json!(p)))
}

pub fn check(p: &str, left: Option<&str>, right: Option<&str>) -> Result<Outcome, CliError> {
    let p = process(p)?;
    let env = TypeEnv::new();
    match (left, right) {
        (Some(l), Some(r)) => {
            let iface = InterfacePair::new(ty(l)?, ty(r)?);
            Ok(match check_process(&env, &p, &iface) {
                Ok(d) => Outcome::new(
                    AFFIRMATIVE,
                    vec![format!("⊢ {p} ▷ {iface}")],
                    json!({ "well_typed": true, "interface": iface.to_string() }),
                )
                .with_evidence(d.render()),
                Err(e) => Outcome::new(
                    NEGATIVE,
                    vec![format!("ill-typed: {e}")],
                    json!({ "well_typed": false, "error": e.to_string() }),
                ),
            })
        }
        (None, None) => Ok(match infer_interfaces(&env, &p) {
            Ok((l, r)) => Outcome::new(
                AFFIRMATIVE,
                vec![format!("⊢ {p} ▷ {l} ; {r}")],
                json!({ "well_typed": true, "left": l.to_string(), "right": r.to_string() }),
            ),
            Err(e) => Outcome::new(
                NEGATIVE,
                vec![format!("ill-typed: {e}")],
                json!({ "well_typed": false, "error": e.to_string() }),
            ),
        }),
        _ => Err(CliError::Usage("check takes either no interface or both its left and right types".into())),
    }
}

pub fn normalize(text: &str) -> Result<Outcome, CliError> {
    let (nf, d) = iso_normalize(&ty(text)?);
    Ok(Outcome::new(AFFIRMATIVE, vec![nf.to_string()], json!(nf.to_string())).with_evidence(d.lines()))
}

pub fn iso(l: &str, r: &str) -> Result<Outcome, CliError> {
    let (t, s) = (ty(l)?, ty(r)?);
    let d = match synthesis_derivation(&t, &s) {
        Ok(d) => d,
        Err(decision) => return Ok(not_derivable(&t, &s, decision)),
    };
    let pair = synthesize(&t, &s).expect("derivable types have adapters");
    let mut text = vec![format!("{t} ≅ {s}")];
    text.extend(pair_lines(&pair));
    let mut out = Outcome::new(
        AFFIRMATIVE,
        text,
        json!({ "derivable": true, "adapters": pair_json(&pair), "steps": d.steps.len() }),
    )
    .with_evidence(d.lines());
    out.always_explain = true;
    Ok(out)
}

pub fn synth(l: &str, r: &str, o: &GlobalOpts) -> Result<Outcome, CliError> {
    let (t, s) = (ty(l)?, ty(r)?);
    let pair = match synthesize(&t, &s) {
        Ok(p) => p,
        Err(decision) => return Ok(not_derivable(&t, &s, decision)),
    };
    Ok(match certify_iso_witnesses(&t, &s, &pair.forward, &pair.backward, &search_opts(o)) {
        Ok(c) => Outcome::new(
            AFFIRMATIVE,
            pair_lines(&pair),
            json!({ "adapters": pair_json(&pair), "certified": true }),
        )
        .with_evidence(certificate_evidence(&c)),
        Err(f) => {
            let mut out = certify_failure(&f);
            out.text.splice(0..0, pair_lines(&pair));
            out
        }
    })
}

pub fn verify(l: &str, r: &str, a: &str, b: &str, o: &GlobalOpts) -> Result<Outcome, CliError> {
    let (t, s) = (ty(l)?, ty(r)?);
    let (a, b) = (process(a)?, process(b)?);
    Ok(match certify_iso_witnesses(&t, &s, &a, &b, &search_opts(o)) {
        Ok(c) => Outcome::new(AFFIRMATIVE, vec!["certified".into()], json!({ "certified": true }))
            .with_evidence(certificate_evidence(&c)),
        Err(f) => certify_failure(&f),
    })
}

pub fn run(p: &str) -> Result<Outcome, CliError> {
    let p = process(p)?;
    Ok(match decide_correct(&p) {
        Correctness::Correct => Outcome::new(AFFIRMATIVE, vec!["correct".into()], json!({ "correct": true })),
        Correctness::Incorrect { trace, error } => {
            let mut text = vec!["incorrect".to_string()];
            if let Some(e) = &error {
                text.push(format!("evaluation error: {e}"));
            }
            text.push(format!("stuck at: {}", stiso_core::semantics::canon(trace.last())));
            let mut out = Outcome::new(
                NEGATIVE,
                text,
                json!({ "correct": false, "stuck": trace.last().to_string(), "error": error.map(|e| e.to_string()) }),
            )
            .with_evidence(trace.lines());
            out.always_explain = true;
            out
        }
    })
}

pub fn equiv(p: &str, q: &str, l: &str, r: &str, o: &GlobalOpts) -> Result<Outcome, CliError> {
    let (p, q) = (process(p)?, process(q)?);
    let iface = InterfacePair::new(ty(l)?, ty(r)?);
    for (name, x) in [("P", &p), ("Q", &q)] {
        if let Err(e) = check_process(&TypeEnv::new(), x, &iface) {
            return Ok(Outcome::new(
                NEGATIVE,
                vec![format!("{name} is ill-typed at {iface}: {e}")],
                json!({ "refuted": false, "error": e.to_string() }),
            ));
        }
    }
    Ok(match equiv_refute(&p, &q, &iface, o.trials, o.seed) {
        Refutation::NoCounterexample { trials } => Outcome::new(
            AFFIRMATIVE,
            vec![format!("no counterexample in {trials} contexts")],
            json!({ "refuted": false, "trials": trials }),
        ),
        Refutation::Refuted { left, right, correct_p, correct_q, trace } => {
            let verdict = |c: bool| if c { "correct" } else { "incorrect" };
            let mut out = Outcome::new(
                NEGATIVE,
                vec![
                    "counterexample found".into(),
                    format!("left context: {left}"),
                    format!("right context: {right}"),
                    format!("with P: {}", verdict(correct_p)),
                    format!("with Q: {}", verdict(correct_q)),
                ],
                json!({
                    "refuted": true,
                    "left": left.to_string(),
                    "right": right.to_string(),
                    "correct_p": correct_p,
                    "correct_q": correct_q,
                }),
            )
            .with_evidence(trace.lines());
            out.always_explain = true;
            out
        }
    })
}

pub fn search(text: &str, o: &GlobalOpts) -> Result<Outcome, CliError> {
    let query = ty(text)?;
    let path = o
        .library
        .as_ref()
        .ok_or_else(|| CliError::Usage("search needs --library <path>".into()))?;
    let lib = lib_load(path).map_err(CliError::Library)?;
    let hits = Searcher::new().search(&lib, &query);
    let mut text = Vec::new();
    let mut evidence = Vec::new();
    let mut result = Vec::new();
    for h in &hits {
        let how = if h.exact { "exact" } else { "isomorphic" };
        text.push(format!("{} : {} ({how})", h.record.name, h.record.type_text));
        evidence.push(format!("{}:", h.record.name));
        evidence.extend(pair_lines(&h.adapters).into_iter().map(|l| format!("  {l}")));
        result.push(json!({
            "name": h.record.name,
            "type": h.record.type_text,
            "exact": h.exact,
            "adapters": pair_json(&h.adapters),
        }));
    }
    if hits.is_empty() {
        text.push(format!("no component isomorphic to {query}"));
    }
    let code = if hits.is_empty() { NEGATIVE } else { AFFIRMATIVE };
    Ok(Outcome::new(code, text, json!(result)).with_evidence(evidence))
}
