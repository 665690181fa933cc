//! Text formats.
//!
//! Selector file: a header line `N k m`, then `m` lines; line `t` lists the
//! sorted labels of `S_t` separated by single spaces (empty for an empty
//! set).
//!
//! Network file: a line `n`, then one line per node `label: out out ...`.
//!
//! Trace: one line per simulated round,
//! `round=<t> tx={..} rx=[v<-u,..] collisions=[v,..]`, then the summary
//! `rounds_total=.. rounds_selector=.. rounds_disperse=.. rounds_rr=..`.

use std::fmt::Write as _;

use permsel_core::coupon::ExactProb;
use permsel_core::radio::{Network, SimTrace};
use permsel_core::{Label, Selector};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Core(#[from] permsel_core::Error),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| {
        syntax(
            line,
            format!("expected a non-negative integer, got {tok:?}"),
        )
    })
}

/// A selector together with the `k` it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorFile {
    pub k: usize,
    pub selector: Selector,
}

pub fn write_selector(k: usize, selector: &Selector) -> String {
    let mut out = format!("{} {} {}\n", selector.universe_size(), k, selector.len());
    for set in selector.sets() {
        let labels: Vec<String> = set.labels().iter().map(ToString::to_string).collect();
        out.push_str(&labels.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_selector(text: &str) -> Result<SelectorFile, FormatError> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 3 {
        return Err(syntax(1, "header must be `N k m`"));
    }
    let n = parse_usize(fields[0], 1)?;
    let k = parse_usize(fields[1], 1)?;
    let m = parse_usize(fields[2], 1)?;
    let mut selector = Selector::empty(n);
    for t in 0..m {
        let line_no = t + 2;
        let line = lines
            .next()
            .ok_or_else(|| syntax(line_no, format!("expected {m} set lines, found {t}")))?;
        let mut labels = Vec::new();
        if !line.is_empty() {
            for tok in line.split(' ') {
                labels.push(parse_usize(tok, line_no)?);
            }
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(syntax(line_no, "labels must be strictly increasing"));
        }
        selector
            .push(labels)
            .map_err(|e| syntax(line_no, e.to_string()))?;
    }
    if let Some(extra) = lines.next() {
        return Err(syntax(
            m + 2,
            format!("unexpected content after {m} sets: {extra:?}"),
        ));
    }
    Ok(SelectorFile { k, selector })
}

pub fn write_network(net: &Network) -> String {
    let mut out = format!("{}\n", net.n());
    for u in 0..net.n() {
        out.push_str(&format!("{u}:"));
        for v in net.out_neighbors(u) {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_network(text: &str) -> Result<Network, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, first) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing node count"))?;
    let n = parse_usize(first, 1)?;
    let mut out: Vec<Option<Vec<Label>>> = vec![None; n];
    let mut seen = 0;
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| syntax(line_no, "expected `label: out ...`"))?;
        let u = parse_usize(head.trim(), line_no)?;
        if u >= n {
            return Err(syntax(line_no, format!("label {u} outside [0, {n})")));
        }
        if out[u].is_some() {
            return Err(syntax(line_no, format!("label {u} listed twice")));
        }
        let targets = rest
            .split_whitespace()
            .map(|tok| {
                let v = parse_usize(tok, line_no)?;
                if v >= n {
                    return Err(syntax(line_no, format!("label {v} outside [0, {n})")));
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        out[u] = Some(targets);
        seen += 1;
    }
    if seen != n {
        let missing = out.iter().position(Option::is_none).unwrap_or(0);
        return Err(syntax(
            0,
            format!("expected {n} node lines, label {missing} is missing"),
        ));
    }
    Ok(Network::from_adjacency(
        out.into_iter().map(Option::unwrap).collect(),
    )?)
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_summary(trace: &SimTrace) -> String {
    let a = &trace.accounting;
    format!(
        "rounds_total={} rounds_selector={} rounds_disperse={} rounds_rr={}",
        a.total(),
        a.selector,
        a.disperse,
        a.singleton
    )
}

pub fn write_trace(trace: &SimTrace) -> String {
    let mut out = String::new();
    for r in &trace.rounds {
        let rx = join(r.delivery.received.iter().map(|(v, u)| format!("{v}<-{u}")));
        writeln!(
            out,
            "round={} tx={{{}}} rx=[{}] collisions=[{}]",
            r.round,
            join(&r.transmitters),
            rx,
            join(&r.delivery.collisions)
        )
        .unwrap();
    }
    out.push_str(&write_summary(trace));
    out.push('\n');
    out
}

pub const SWEEP_HEADER: &str = "ell,k,q,exact_num,exact_den,bound";

/// One CSV row; `q` empty for the plain subsequence event.
pub fn sweep_row(ell: usize, k: usize, q: Option<usize>, exact: &ExactProb, bound: f64) -> String {
    format!(
        "{ell},{k},{},{},{},{bound}",
        q.map(|q| q.to_string()).unwrap_or_default(),
        exact.numerator(),
        exact.denominator()
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_text_layout() {
        let sel = Selector::new(3, [vec![0, 2], vec![], vec![1]]).unwrap();
        let text = write_selector(2, &sel);
        assert_eq!(text, "3 2 3\n0 2\n\n1\n");
        let back = parse_selector(&text).unwrap();
        assert_eq!(
            back,
            SelectorFile {
                k: 2,
                selector: sel
            }
        );
        let trailing_empty = Selector::new(2, [vec![0], vec![]]).unwrap();
        assert_eq!(
            parse_selector(&write_selector(1, &trailing_empty))
                .unwrap()
                .selector,
            trailing_empty
        );
    }

    #[test]
    fn selector_parse_errors() {
        assert!(parse_selector("").is_err());
        assert!(parse_selector("3 2\n").is_err());
        assert!(parse_selector("3 2 2\n0\n").is_err());
        assert!(parse_selector("3 2 1\n3\n").is_err());
        assert!(parse_selector("3 2 1\n1 0\n").is_err());
        assert!(parse_selector("3 2 1\n0\n1\n").is_err());
        assert!(parse_selector("3 2 1\n0  1\n").is_err());
    }

    #[test]
    fn network_text() {
        let net = Network::from_edges(3, [(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        let text = write_network(&net);
        assert_eq!(text, "3\n0: 1 2\n1: 2\n2: 0\n");
        assert_eq!(parse_network(&text).unwrap(), net);
        assert_eq!(
            parse_network("2\n1:\n0: 1\n").unwrap(),
            Network::from_edges(2, [(0, 1)]).unwrap()
        );
        assert!(parse_network("2\n0: 1\n").is_err());
        assert!(parse_network("2\n0: 2\n1:\n").is_err());
        assert!(parse_network("2\n0: 1\n0: 1\n").is_err());
        assert!(parse_network("x\n").is_err());
    }

    #[test]
    fn csv_row() {
        let p = ExactProb::from_u64(1, 2);
        assert_eq!(sweep_row(3, 2, None, &p, 0.25), "3,2,,1,2,0.25");
        assert_eq!(sweep_row(3, 4, Some(2), &p, 1.5), "3,4,2,1,2,1.5");
    }
}
