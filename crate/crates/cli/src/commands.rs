use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use marginal_choice::availability::construct_mu_traced;
use marginal_choice::domain::full_mask;
use marginal_choice::flow::rationalize_menus;
use marginal_choice::format::DatasetFile;
use marginal_choice::generators::{generate, Generated, Model};
use marginal_choice::luce::{luce_invert_with, LuceOptions};
use marginal_choice::prelude::*;
use marginal_choice::rational::format_rational;

use crate::report::{self, q, Report, Verdict};

pub fn load(path: &Path) -> Result<DatasetFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    DatasetFile::from_json(&text)
}

pub fn check(file: &DatasetFile) -> Result<Report> {
    let data = file.marginal()?;
    let u = &data.universe;
    let v = game_from_mu(&data.mu);
    let membership = core_contains(&v, &data.lambda)?;
    let headline = if membership.member {
        "lambda is in the core: the data are rationalizable"
    } else {
        "lambda is outside the core: the data are not rationalizable"
    };
    let mut r = Report::new("check", Verdict::from_bool(membership.member), headline);
    if let Some((m, slack)) = &membership.min_slack {
        r.line(format!("min slack {} at {}", format_rational(slack), u.menu_key(*m)));
        r.field("min_slack", json!({"menu": u.menu_key(*m), "slack": q(slack)}));
    }
    if !membership.tight.is_empty() {
        let keys: Vec<String> = membership.tight.iter().map(|m| u.menu_key(*m)).collect();
        r.line(format!("tight: {}", keys.join("; ")));
    }
    r.lines.extend(report::deficits(u, &membership.violated));
    let slacks: Map<String, Value> = (1..full_mask(data.n()))
        .map(|mask| (u.mask_key(mask), q(&(data.lambda.mass(mask) - v.value(mask)))))
        .collect();
    r.field("tight", report::menu_list(u, &membership.tight))
        .field("violated", report::menu_values(u, &membership.violated))
        .field("slacks", slacks.into());
    Ok(r)
}

pub fn rationalize(file: &DatasetFile) -> Result<Report> {
    let data = file.marginal()?;
    let u = &data.universe;
    let flow = marginal_choice::flow::rationalize(&data);
    if let Some(pi) = flow.choice_function(data.n(), &rationalize_menus(&data)) {
        let mut r = Report::new("rationalize", Verdict::Positive, "rationalizable; a conditional choice system:");
        r.lines.extend(report::pi_lines(u, &pi));
        r.field("pi", report::pi(u, &pi));
        return Ok(r);
    }
    let mut r = Report::new("rationalize", Verdict::Negative, "not rationalizable");
    if let Some(cut) = &flow.cut {
        let key = u.menu_key(cut.set);
        r.line(format!(
            "menus inside {{{key}}} carry {} but lambda({{{key}}}) = {}",
            format_rational(&cut.forced_mass),
            format_rational(&cut.choice_mass)
        ));
        r.field(
            "cut",
            json!({"menu": key, "forced_mass": q(&cut.forced_mass), "choice_mass": q(&cut.choice_mass)}),
        );
    }
    r.field("max_flow", q(&flow.max_flow));
    Ok(r)
}

pub fn rum(file: &DatasetFile) -> Result<Report> {
    let data = file.marginal()?;
    let u = &data.universe;
    let nu = match rum_rationalize(&data, OrderCap::default()) {
        Ok(nu) => nu,
        Err(Error::NotRationalizable { violated }) => {
            let mut r = Report::new("rum", Verdict::Negative, "no random utility model fits the data");
            r.lines.extend(report::deficits(u, &violated));
            r.field("violated", report::menu_values(u, &violated));
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let mut r = Report::new("rum", Verdict::Positive, "random utility rationalizable; orders:");
    for (o, w) in nu.iter() {
        r.line(format!("{} with probability {}", u.order_key(o), format_rational(w)));
    }
    r.field("nu", report::nu(u, &nu));
    match (inferior_chain(&data), unique_rum(&data)) {
        (Ok(chain), Ok(unique)) => {
            let full = full_mask(data.n());
            let chain: Vec<Menu> = chain.into_iter().filter(|m| m.bits() != full).collect();
            let keys: Vec<String> = chain.iter().map(|m| format!("{{{}}}", u.menu_key(*m))).collect();
            r.line(format!("inferior sets: {}", if keys.is_empty() { "none".into() } else { keys.join(" < ") }));
            r.line(format!("unique: {}", if unique { "yes" } else { "no" }));
            r.field("inferior_chain", report::menu_list(u, &chain))
                .field("unique", json!(unique));
        }
        (Err(e), _) | (_, Err(e)) => {
            r.line(format!("identification skipped: {e}"));
        }
    }
    Ok(r)
}

pub fn luce(file: &DatasetFile, tolerance: f64) -> Result<Report> {
    let data = file.marginal()?;
    let u = &data.universe;
    let options = LuceOptions {
        tolerance,
        ..LuceOptions::default()
    };
    let inversion = match luce_invert_with(&data, options) {
        Ok(inv) => inv,
        Err(e @ (Error::NotInterior | Error::NotInCore | Error::NoConvergence { .. })) => {
            let mut r = Report::new("luce", Verdict::Negative, format!("no Luce weights: {e}"));
            r.field("reason", json!(e.to_string()));
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let mut r = Report::new("luce", Verdict::Positive, "Luce weights:");
    for (label, w) in u.labels().iter().zip(&inversion.weights) {
        r.line(format!("u({label}) = {w:.12}"));
    }
    r.line(format!(
        "residual {:.3e} after {} iterations",
        inversion.residual, inversion.iterations
    ));
    let weights: Map<String, Value> = u
        .labels()
        .iter()
        .zip(&inversion.weights)
        .map(|(l, w)| (l.clone(), json!(w)))
        .collect();
    r.field("u", weights.into())
        .field("residual", json!(inversion.residual))
        .field("iterations", json!(inversion.iterations));
    if let Some(exact) = &inversion.exact {
        let shown: Vec<String> = exact.as_slice().iter().map(format_rational).collect();
        r.line(format!("exact: ({})", shown.join(", ")));
        r.field("u_exact", report::choice(u, exact.as_slice()));
    }
    Ok(r)
}

pub fn ircs(file: &DatasetFile) -> Result<Report> {
    let data = file.star()?;
    let u = &data.universe;
    let solutions = ircs_rationalize(&data, OrderCap::default())?;
    let mut r = if solutions.is_empty() {
        Report::new("ircs", Verdict::Negative, "no order yields consideration probabilities in (0, 1]")
    } else {
        Report::new(
            "ircs",
            Verdict::Positive,
            format!("{} consideration solution(s):", solutions.len()),
        )
    };
    let mut listed = Vec::new();
    for s in &solutions {
        let gamma: Vec<String> = s
            .gamma
            .iter()
            .enumerate()
            .map(|(a, g)| format!("{} {}", u.label(a), format_rational(g)))
            .collect();
        r.line(format!("{}: gamma = {}", u.order_key(&s.order), gamma.join(", ")));
        listed.push(json!({"order": u.order_key(&s.order), "gamma": report::choice(u, &s.gamma)}));
    }
    r.field("solutions", listed.into());
    Ok(r)
}

fn collection(file: &DatasetFile, universe: &Universe, flag: Option<&str>) -> Result<FeasibleCollection> {
    if let Some(text) = flag {
        return marginal_choice::format::parse_collection(universe, text);
    }
    file.collection(universe)?.ok_or_else(|| {
        Error::Format("feasible: required for two-stage models (file field or --feasible)".into())
    })
}

pub fn tsc(file: &DatasetFile, feasible: Option<&str>) -> Result<Report> {
    let data = file.marginal()?;
    let u = &data.universe;
    let collection = collection(file, u, feasible)?;
    Ok(match tsc_rationalize(&data, &collection)? {
        TscVerdict::Rationalizable { pi } => {
            let mut r = Report::new("tsc", Verdict::Positive, "temptation and self-control rationalizable:");
            r.lines.extend(report::pi_lines(u, &pi));
            r.field("pi", report::pi(u, &pi));
            r
        }
        TscVerdict::RedundantInSupport { menus } => {
            let mut r = Report::new("tsc", Verdict::Negative, "redundant menus occur with positive probability");
            for (m, w) in &menus {
                r.line(format!("{{{}}} has probability {}", u.menu_key(*m), format_rational(w)));
            }
            r.field("redundant_in_support", report::menu_values(u, &menus));
            r
        }
        TscVerdict::CoreViolation { violated } => {
            let mut r = Report::new("tsc", Verdict::Negative, "lambda is outside the core of the modified game");
            r.lines.extend(report::deficits(u, &violated));
            r.field("violated", report::menu_values(u, &violated));
            r
        }
    })
}

pub fn pf(file: &DatasetFile, feasible: Option<&str>) -> Result<Report> {
    let data = file.marginal()?;
    let u = &data.universe;
    let collection = collection(file, u, feasible)?;
    Ok(match pf_rationalize(&data, &collection)? {
        PfVerdict::Rationalizable => Report::new(
            "pf",
            Verdict::Positive,
            "preference for flexibility rationalizable",
        ),
        PfVerdict::NotRationalizable {
            nested_in_support,
            violated,
        } => {
            let mut r = Report::new("pf", Verdict::Negative, "not rationalizable by preference for flexibility");
            for (m, w) in &nested_in_support {
                r.line(format!("nested menu {{{}}} has probability {}", u.menu_key(*m), format_rational(w)));
            }
            r.lines.extend(report::deficits(u, &violated));
            r.field("nested_in_support", report::menu_values(u, &nested_in_support))
                .field("violated", report::menu_values(u, &violated));
            r
        }
        PfVerdict::Indeterminate { tight } => {
            let mut r = Report::new(
                "pf",
                Verdict::Negative,
                "indeterminate: necessary conditions hold with tight constraints",
            );
            let keys: Vec<String> = tight.iter().map(|m| u.menu_key(*m)).collect();
            r.line(format!("tight: {}", keys.join("; ")));
            r.field("indeterminate", json!(true))
                .field("tight", report::menu_list(u, &tight));
            r
        }
    })
}

pub fn avail(file: &DatasetFile) -> Result<Report> {
    let (universe, xi, lambda) = file.availability()?;
    let u = &universe;
    if !potentially_rationalizable(&xi, &lambda)? {
        let over: Vec<String> = (0..u.len())
            .filter(|&a| lambda[a] > xi.as_slice()[a])
            .map(|a| u.label(a).to_string())
            .collect();
        let mut r = Report::new("avail", Verdict::Negative, "lambda exceeds availability");
        r.line(format!("over-chosen: {}", over.join(", ")));
        r.field("over_chosen", json!(over));
        return Ok(r);
    }
    let (mu, iterations) = construct_mu_traced(&xi, &lambda)?;
    let mut r = Report::new("avail", Verdict::Positive, "potentially rationalizable; a menu distribution:");
    for (m, w) in mu.iter() {
        r.line(format!("mu({}) = {}", u.menu_key(m), format_rational(w)));
    }
    r.line(format!("{iterations} mass shift(s)"));
    r.field("mu", report::mu(u, &mu))
        .field("iterations", json!(iterations));
    Ok(r)
}

/// The dataset file for a generated instance and the parameters behind it.
pub fn generated_file(instance: &Generated) -> (DatasetFile, Value) {
    match instance {
        Generated::Rum { data, nu } => (
            DatasetFile::from_marginal(data),
            json!({"nu": report::nu(&data.universe, nu)}),
        ),
        Generated::Luce { data, u } => (
            DatasetFile::from_marginal(data),
            json!({"u": report::choice(&data.universe, u.as_slice())}),
        ),
        Generated::Ircs { data, order, gamma } => (
            DatasetFile::from_star(data),
            json!({
                "order": data.universe.order_key(order),
                "gamma": report::choice(&data.universe, gamma),
            }),
        ),
        Generated::Tsc { data, collection } => (
            DatasetFile::from_marginal(data).with_collection(&data.universe, collection),
            json!({}),
        ),
        Generated::Availability { universe, xi, lambda } => (
            DatasetFile::from_availability(universe, xi, lambda),
            json!({}),
        ),
    }
}

pub struct GenOutput {
    pub seed: u64,
    pub file: DatasetFile,
    pub parameters: Value,
}

pub fn gen(model: Model, n: usize, seed: u64, batch: usize) -> Result<Vec<GenOutput>> {
    (0..batch as u64)
        .into_par_iter()
        .map(|i| {
            let seed = seed.wrapping_add(i);
            let (file, parameters) = generated_file(&generate(model, n, seed)?);
            Ok(GenOutput {
                seed,
                file,
                parameters,
            })
        })
        .collect()
}
