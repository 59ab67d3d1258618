use serde_json::{json, Value};

use super::{Estimate, KappaSample, SpectrumReport, Witness};

fn witness_json(w: &Witness) -> Value {
    match w {
        Witness::Kappa { j, n } => json!({"kind": "kappa", "j": j, "n": n}),
        Witness::Jump { q, j, n } => json!({"kind": "jump", "q": q.to_string(), "j": j, "n": n}),
        Witness::Index(n) => json!({"kind": "index", "n": n}),
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Kappa { j, n } => format!("kappa{j}(n={n})"),
        Witness::Jump { q, j, n } => format!("q={q}:kappa{j}(n={n})"),
        Witness::Index(n) => format!("n={n}"),
    }
}

fn estimate_json(e: &Estimate) -> Value {
    json!({
        "lo": e.value.decimal(30).split("..").next().unwrap_or_default(),
        "hi": e.value.decimal(30).split("..").nth(1).unwrap_or_default(),
        "witness": witness_json(&e.witness),
    })
}

/// Rows of a spectrum report: one per functional.
pub fn report_rows(r: &SpectrumReport) -> Vec<(&'static str, &Estimate)> {
    vec![
        ("lambda", &r.lambda),
        ("j", &r.j),
        ("k", &r.k),
        ("j_star", &r.j_star),
        ("k_star", &r.k_star),
    ]
}

pub fn report_json(r: &SpectrumReport) -> Value {
    let mut est = serde_json::Map::new();
    for (name, e) in report_rows(r) {
        est.insert(name.to_string(), estimate_json(e));
    }
    json!({
        "schema": 1,
        "alpha": r.alpha.to_string(),
        "horizon": r.horizon,
        "window": [r.window.0, r.window.1],
        "method": r.method.as_str(),
        "threshold": r.threshold,
        "estimates": est,
    })
}

/// `name  lo  hi  witness` lines.
pub fn report_tsv(r: &SpectrumReport) -> String {
    let mut s = String::from("quantity\tlo\thi\twitness\n");
    for (name, e) in report_rows(r) {
        let d = e.value.decimal(30);
        let (lo, hi) = d.split_once("..").unwrap_or((&d, &d));
        s.push_str(&format!("{name}\t{lo}\t{hi}\t{}\n", witness_text(&e.witness)));
    }
    s
}

pub fn report_human(r: &SpectrumReport) -> String {
    let mut s = format!(
        "{}  N={} window=[{}, {}] method={} threshold={}\n",
        r.alpha,
        r.horizon,
        r.window.0,
        r.window.1,
        r.method.as_str(),
        r.threshold
    );
    for (name, e) in report_rows(r) {
        s.push_str(&format!(
            "  {name:<7} {}  at {}\n",
            e.value.decimal(15),
            witness_text(&e.witness)
        ));
    }
    s
}

pub fn kappa_json(k: &KappaSample) -> Value {
    json!({
        "schema": 1,
        "n": k.n,
        "j": k.j,
        "digit": k.digit,
        "products": k.via_products.decimal(25),
        "tails": k.via_tails.decimal(25),
        "consistent": k.consistent(),
    })
}

pub fn kappa_table_tsv(rows: &[KappaSample]) -> String {
    let mut s = String::from("n\tj\ta_n\tvia_products\tvia_tails\tconsistent\n");
    for k in rows {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            k.n,
            k.j,
            k.digit,
            k.via_products.decimal(25),
            k.via_tails.decimal(25),
            k.consistent()
        ));
    }
    s
}
