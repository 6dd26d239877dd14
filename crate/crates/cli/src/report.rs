use serde_json::{json, Map, Value};

use marginal_choice::format::{choice_map, mu_map};
use marginal_choice::prelude::*;
use marginal_choice::rational::format_rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

impl Verdict {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Positive => 0,
            Verdict::Negative => 1,
        }
    }
}

/// What a subcommand prints: a headline, detail lines for humans, and a
/// JSON object for machines.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub verdict: Verdict,
    pub headline: String,
    pub lines: Vec<String>,
    pub fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, verdict: Verdict, headline: impl Into<String>) -> Self {
        Report {
            command,
            verdict,
            headline: headline.into(),
            lines: Vec::new(),
            fields: Map::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) -> &mut Self {
        self.lines.push(text.into());
        self
    }

    pub fn field(&mut self, key: &str, value: Value) -> &mut Self {
        self.fields.insert(key.to_string(), value);
        self
    }

    pub fn text(&self) -> String {
        let mut out = format!("{}\n", self.headline);
        for line in &self.lines {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let mut object = Map::new();
        object.insert("command".into(), json!(self.command));
        let verdict = match self.verdict {
            Verdict::Positive => "positive",
            Verdict::Negative => "negative",
        };
        object.insert("verdict".into(), json!(verdict));
        object.insert("summary".into(), json!(self.headline));
        object.extend(self.fields.clone());
        serde_json::to_string_pretty(&Value::Object(object)).expect("plain data serializes")
    }
}

pub fn q(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

pub fn menu_values(universe: &Universe, entries: &[(Menu, Rational)]) -> Value {
    entries
        .iter()
        .map(|(m, r)| (universe.menu_key(*m), q(r)))
        .collect::<Map<_, _>>()
        .into()
}

pub fn menu_list(universe: &Universe, menus: &[Menu]) -> Value {
    menus.iter().map(|m| json!(universe.menu_key(*m))).collect()
}

pub fn choice(universe: &Universe, values: &[Rational]) -> Value {
    serde_json::to_value(choice_map(universe, values)).expect("plain data serializes")
}

pub fn mu(universe: &Universe, mu: &MenuDistribution) -> Value {
    serde_json::to_value(mu_map(universe, mu)).expect("plain data serializes")
}

pub fn pi(universe: &Universe, pi: &StochasticChoiceFunction) -> Value {
    pi.iter()
        .map(|(m, d)| (universe.menu_key(m), choice(universe, d.as_slice())))
        .collect::<Map<_, _>>()
        .into()
}

pub fn pi_lines(universe: &Universe, pi: &StochasticChoiceFunction) -> Vec<String> {
    pi.iter()
        .map(|(m, d)| {
            let picks = d
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != Rational::from_integer(0.into()))
                .map(|(a, p)| format!("{} {}", universe.label(a), format_rational(p)))
                .collect::<Vec<_>>()
                .join(", ");
            format!("pi(. | {{{}}}) = {picks}", universe.menu_key(m))
        })
        .collect()
}

pub fn nu(universe: &Universe, nu: &OrderDistribution) -> Value {
    nu.iter()
        .map(|(o, w)| (universe.order_key(o), q(w)))
        .collect::<Map<_, _>>()
        .into()
}

pub fn deficits(universe: &Universe, violated: &[(Menu, Rational)]) -> Vec<String> {
    violated
        .iter()
        .map(|(m, d)| format!("violated at {}: short by {}", universe.menu_key(*m), format_rational(d)))
        .collect()
}
