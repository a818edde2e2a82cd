use std::fs;
use std::path::{Path, PathBuf};

use osg_core::algebra::format_rational;
use osg_core::certifier::{
    build_constraints, certify_uniqueness, replay_proof, verify_certificate, CertificateDocument, Conclusion,
    CertifyOptions,
};
use osg_core::deformation::{DeformationSpec, Mode};
use osg_core::expr::ClassExpression;
use osg_core::index::{betti_profile, enumerate_basis, enumerate_degree, PartitionIndex, Rank};
use osg_core::pieri::{pieri_tau1, pieri_tau11, tau11_case, tau1_case};
use osg_core::ring::MultiplicationTable;
use osg_core::verify::{self, AssocOptions};
use serde_json::{json, Value};

use crate::render::{class_json, index_json, latex_class, latex_index, latex_rational, Rendered};
use crate::{Command, Common, Failure, Method, ModeArg, SpecialArg, SuiteArg};

pub const CACHE_ENV: &str = "OSG_CACHE_DIR";

type Outcome = Result<Rendered, Failure>;

pub fn parse_index(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected L1,L2, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad first entry in `{s}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad second entry in `{s}`"))?;
    Ok((a, b))
}

fn idx((a, b): (i64, i64)) -> PartitionIndex {
    PartitionIndex::new(a, b)
}

fn mode_of(m: ModeArg) -> Mode {
    match m {
        ModeArg::PerPair => Mode::PerPair,
        ModeArg::PerMu => Mode::PerMu,
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

pub fn cache_path(n: u32) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(|dir| PathBuf::from(dir).join(format!("osg-table-n{n}.json")))
}

/// The table for `rank`, read from the cache directory when one is set and
/// written there after a fresh build.
fn table_for(rank: Rank) -> Result<MultiplicationTable, Failure> {
    let Some(path) = cache_path(rank.get()) else {
        return Ok(MultiplicationTable::build(rank)?);
    };
    if let Ok(src) = fs::read_to_string(&path) {
        match MultiplicationTable::from_json(&src, false) {
            Ok(t) if t.rank() == rank => return Ok(t),
            _ => eprintln!("warning: ignoring unusable cache file {}", path.display()),
        }
    }
    let table = MultiplicationTable::build(rank)?;
    let write = path
        .parent()
        .map_or(Ok(()), fs::create_dir_all)
        .and_then(|_| fs::write(&path, table.to_json().expect("table serializes")));
    if let Err(e) = write {
        eprintln!("warning: could not write cache {}: {e}", path.display());
    }
    Ok(table)
}

pub fn run(cmd: &Command) -> Outcome {
    let common = cmd.common();
    match cmd {
        Command::Basis { degree, .. } => basis(common, *degree),
        Command::Mult { expr, .. } => mult(common, expr),
        Command::Pieri { class, with, .. } => pieri(common, *class, idx(*with)),
        Command::Gw { lambda, mu, nu, d, .. } => gw(common, idx(*lambda), idx(*mu), idx(*nu), *d),
        Command::Verify { suite, samples, .. } => verify_suite(common, *suite, *samples),
        Command::Certify { mode, method, emit_certificate, max_constraints, .. } => {
            certify(common, mode_of(*mode), *method, emit_certificate.as_deref(), *max_constraints)
        }
        Command::CheckStar { spec, .. } => check_star(common, spec),
        Command::Table { out, load, revalidate, .. } => table(common, out.as_deref(), load.as_deref(), *revalidate),
    }
}

fn basis(c: Common, degree: Option<i64>) -> Outcome {
    let rank = Rank::new(c.n)?;
    let classes = match degree {
        Some(d) => enumerate_degree(rank, d),
        None => enumerate_basis(rank),
    };
    let betti = betti_profile(rank);
    let text = classes.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("\n");
    let latex = classes.iter().map(|l| latex_index(*l)).collect::<Vec<_>>().join(", ");
    Ok(Rendered {
        json: json!({
            "command": "basis",
            "n": c.n,
            "degree": degree,
            "count": classes.len(),
            "classes": classes.iter().map(|l| index_json(*l)).collect::<Vec<_>>(),
            "betti": betti,
        }),
        text,
        latex,
        ok: true,
    })
}

fn mult(c: Common, src: &str) -> Outcome {
    let rank = Rank::ring(c.n)?;
    let expr = ClassExpression::parse(src)?;
    let table = table_for(rank)?;
    let v = expr.evaluate(&table)?;
    Ok(Rendered {
        json: json!({
            "command": "mult",
            "n": c.n,
            "expression": expr.to_string(),
            "result": class_json(&v),
            "display": v.to_string(),
        }),
        text: v.to_string(),
        latex: latex_class(&v),
        ok: true,
    })
}

fn pieri(c: Common, class: SpecialArg, lam: PartitionIndex) -> Outcome {
    let rank = Rank::ring(c.n)?;
    let (label, case, v) = match class {
        SpecialArg::One => ("1", format!("{:?}", tau1_case(rank, lam)?), pieri_tau1(rank, lam)?),
        SpecialArg::OneOne => ("11", format!("{:?}", tau11_case(rank, lam)?), pieri_tau11(rank, lam)?),
    };
    let special = if label == "1" { "\\tau_{1}" } else { "\\tau_{(1,1)}" };
    Ok(Rendered {
        json: json!({
            "command": "pieri",
            "n": c.n,
            "class": label,
            "with": index_json(lam),
            "case": case,
            "result": class_json(&v),
            "display": v.to_string(),
        }),
        text: v.to_string(),
        latex: format!("{special} \\star {} = {}", latex_index(lam), latex_class(&v)),
        ok: true,
    })
}

fn gw(c: Common, lam: PartitionIndex, mu: PartitionIndex, nu: PartitionIndex, d: u32) -> Outcome {
    let rank = Rank::ring(c.n)?;
    for x in [lam, mu, nu] {
        x.validate(rank)?;
    }
    let table = table_for(rank)?;
    let value = table.gw_constant(lam, mu, nu, d)?;
    Ok(Rendered {
        json: json!({
            "command": "gw",
            "n": c.n,
            "lambda": index_json(lam),
            "mu": index_json(mu),
            "nu": index_json(nu),
            "d": d,
            "value": format_rational(&value),
        }),
        text: format_rational(&value),
        latex: latex_rational(&value),
        ok: true,
    })
}

fn verify_suite(c: Common, suite: SuiteArg, samples: usize) -> Outcome {
    let rank = Rank::ring(c.n)?;
    let table = table_for(rank)?;
    let report = match suite {
        SuiteArg::Identities => verify::identities(&table)?,
        SuiteArg::Assoc => verify::assoc(&table, AssocOptions { samples, ..AssocOptions::default() })?,
        SuiteArg::Pairing => verify::pairing(&table)?,
        SuiteArg::Betti => verify::betti(rank),
        SuiteArg::Negativity => verify::negativity(&table),
    };
    let verdict = if report.passed { "passed" } else { "FAILED" };
    let mut text = format!("{} n={}: {verdict} ({} checks)", report.suite, c.n, report.checked);
    for line in report.details.iter().chain(&report.failures) {
        text.push_str("\n  ");
        text.push_str(line);
    }
    let latex = format!("\\text{{{} at }} n={}: \\text{{{verdict}}}", report.suite, c.n);
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["command"] = json!("verify");
    Ok(Rendered { ok: report.passed, json, text, latex })
}

fn certify(c: Common, mode: Mode, method: Method, emit: Option<&Path>, cap: usize) -> Outcome {
    let rank = Rank::ring(c.n)?;
    if emit.is_some() && method == Method::Replay {
        return Err(Failure::Usage("--emit-certificate needs --method fm or both".into()));
    }
    let table = table_for(rank)?;

    let mut fm_json = Value::Null;
    let mut fm_conclusion = None;
    let mut cert_doc = None;
    if method != Method::Replay {
        let system = build_constraints(&table, mode)?;
        let cert = certify_uniqueness(&system, CertifyOptions { max_constraints: cap })?;
        let verified = verify_certificate(&system, &cert);
        let doc = CertificateDocument::new(&system, &cert);
        fm_json = json!({
            "conclusion": cert.conclusion,
            "verified": verified,
            "unknowns": system.unknowns.len(),
            "constraints": system.constraints.len(),
            "intervals": doc.intervals,
            "witness": doc.witness,
            "trace": cert.trace,
        });
        fm_conclusion = Some((cert.conclusion.clone(), verified));
        cert_doc = Some(doc);
    }

    let mut replay_json = Value::Null;
    let mut replay_conclusion = None;
    if method != Method::Fm {
        let report = replay_proof(&table)?;
        replay_json = json!({
            "mode": Mode::PerPair,
            "conclusion": report.conclusion,
            "summary": report.summary(),
            "steps": report.steps.len(),
            "facts": report.facts.len(),
            "notes": report.notes,
        });
        replay_conclusion = Some(report.conclusion);
    }

    let mut parts = Vec::new();
    let mut ok = true;
    if let Some((concl, verified)) = &fm_conclusion {
        parts.push(format!("{concl} (fm)"));
        ok &= *concl == Conclusion::UniqueZero && *verified;
    }
    if let Some(concl) = &replay_conclusion {
        parts.push(format!("{concl} (replay)"));
        ok &= *concl == Conclusion::UniqueZero;
    }
    let agree = match (&fm_conclusion, &replay_conclusion) {
        (Some((a, _)), Some(b)) => Some(a == b),
        _ => None,
    };
    ok &= agree != Some(false);

    if let (Some(path), Some(doc)) = (emit, &cert_doc) {
        let body = serde_json::to_string_pretty(doc).expect("certificate serializes");
        fs::write(path, body + "\n").map_err(|e| io_err(path, e))?;
    }

    let text = parts.join(" / ");
    let latex = format!("\\text{{{}}}", text);
    Ok(Rendered {
        json: json!({
            "command": "certify",
            "n": c.n,
            "mode": mode,
            "method": match method { Method::Fm => "fm", Method::Replay => "replay", Method::Both => "both" },
            "conclusion": if ok { "UniqueZero" } else { "Inconclusive" },
            "fm": fm_json,
            "replay": replay_json,
            "agree": agree,
            "certificate": emit.map(|p| p.display().to_string()),
        }),
        text,
        latex,
        ok,
    })
}

fn check_star(c: Common, path: &Path) -> Outcome {
    let rank = Rank::ring(c.n)?;
    let src = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let spec = DeformationSpec::from_json(&src)?;
    if spec.rank() != rank {
        return Err(Failure::Usage(format!("spec is for n={}, not n={}", spec.rank().get(), c.n)));
    }
    let table = table_for(rank)?;
    let report = spec.check_condition_star(&table)?;
    let mut text = if report.passes { "passes".to_string() } else { "fails".to_string() };
    for v in &report.violations {
        text.push_str(&format!(
            "\n  sigma_(1,1) * sigma{}: coefficient {} on q^{} sigma{}",
            v.mu,
            format_rational(&v.value),
            v.d,
            v.nu
        ));
    }
    let latex = format!("\\text{{{}}}", if report.passes { "passes" } else { "fails" });
    Ok(Rendered {
        json: json!({
            "command": "check-star",
            "n": c.n,
            "mode": spec.mode(),
            "passes": report.passes,
            "violations": report.violations,
        }),
        text,
        latex,
        ok: report.passes,
    })
}

fn table(c: Common, out: Option<&Path>, load: Option<&Path>, revalidate: bool) -> Outcome {
    let rank = Rank::ring(c.n)?;
    let (action, path, identical, t) = match load {
        Some(path) => {
            let src = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let t = MultiplicationTable::from_json(&src, revalidate)?;
            if t.rank() != rank {
                return Err(Failure::Usage(format!("{} holds n={}, not n={}", path.display(), t.rank().get(), c.n)));
            }
            let same = t.to_json()? == src.trim_end();
            (String::from("load"), path.to_path_buf(), Some(same), t)
        }
        None => {
            let path = match out {
                Some(p) => p.to_path_buf(),
                None => cache_path(c.n)
                    .ok_or_else(|| Failure::Usage(format!("give --out or --load, or set {CACHE_ENV}")))?,
            };
            let t = MultiplicationTable::build(rank)?;
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            }
            fs::write(&path, t.to_json()? + "\n").map_err(|e| io_err(&path, e))?;
            (String::from("build"), path, None, t)
        }
    };
    let ok = identical != Some(false);
    let text = format!(
        "{action} n={}: {} basis classes, {} stored products -> {}{}{}",
        c.n,
        t.basis().len(),
        t.stored_products(),
        path.display(),
        if revalidate { ", revalidated" } else { "" },
        match identical {
            Some(true) => ", re-serializes identically",
            Some(false) => ", re-serialization DIFFERS",
            None => "",
        }
    );
    Ok(Rendered {
        json: json!({
            "command": "table",
            "n": c.n,
            "action": action,
            "path": path.display().to_string(),
            "basis": t.basis().len(),
            "products": t.stored_products(),
            "revalidated": revalidate,
            "identical": identical,
        }),
        latex: format!("\\text{{{}}}", text.replace('_', "\\_")),
        text,
        ok,
    })
}
