//! Plain-text serialization for games (`.game`) and mixed profiles
//! (`.prof`). The writer is canonical: re-parsing its output yields an
//! identical in-memory value, and writing again yields identical bytes.

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, QuadAlgebraic, Rational};
use crate::game::{MixedProfile, StrategicGame};

fn err_at(line_no: usize, msg: impl std::fmt::Display) -> Error {
    Error::Syntax(format!("line {line_no}: {msg}"))
}

/// Lines that carry content: (1-based line number, trimmed text).
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_game(game: &StrategicGame) -> String {
    write_game_with_comments(game, &[])
}

pub fn write_game_with_comments(game: &StrategicGame, comments: &[String]) -> String {
    let m = game.player_count();
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str("game 1\n");
    out.push_str(&format!("players {m}\n"));
    let counts = game.action_counts();
    out.push_str("actions");
    for c in &counts {
        out.push_str(&format!(" {c}"));
    }
    out.push('\n');
    for p in 0..m {
        out.push_str(&format!("labels {}", p + 1));
        for l in game.labels(p) {
            out.push_str(&format!(" {l}"));
        }
        out.push('\n');
    }
    for profile in game.profiles() {
        out.push_str("payoff");
        for &a in &profile {
            out.push_str(&format!(" {}", a + 1));
        }
        out.push_str(" :");
        for r in game.payoff(&profile) {
            out.push_str(&format!(" {}", fmt_rational(r)));
        }
        out.push('\n');
    }
    out
}

pub fn parse_game(text: &str) -> Result<StrategicGame> {
    let mut lines = content_lines(text);
    let (n0, header) = lines.next().ok_or_else(|| err_at(1, "empty game file"))?;
    if header != "game 1" {
        return Err(err_at(n0, format!("expected `game 1` header, got `{header}`")));
    }
    let (n1, players_line) = lines.next().ok_or_else(|| err_at(n0, "missing players line"))?;
    let m: usize = players_line
        .strip_prefix("players ")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| err_at(n1, "expected `players <m>`"))?;
    if m == 0 {
        return Err(err_at(n1, "player count must be positive"));
    }
    let (n2, actions_line) = lines.next().ok_or_else(|| err_at(n1, "missing actions line"))?;
    let counts: Vec<usize> = actions_line
        .strip_prefix("actions")
        .map(|s| {
            s.split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| err_at(n2, "bad action count")))
                .collect::<Result<Vec<_>>>()
        })
        .ok_or_else(|| err_at(n2, "expected `actions <n1> ... <nm>`"))??;
    if counts.len() != m {
        return Err(err_at(n2, format!("expected {m} action counts, got {}", counts.len())));
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(err_at(n2, "action counts must be positive"));
    }

    let mut labels: Vec<Option<Vec<String>>> = vec![None; m];
    let cells: usize = counts.iter().product();
    let mut payoffs: Vec<Option<Vec<Rational>>> = vec![None; cells];
    let mut seen_payoffs = 0usize;

    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("labels ") {
            let mut toks = rest.split_whitespace();
            let p: usize = toks
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| err_at(ln, "expected `labels <player> <l1> ...`"))?;
            if p == 0 || p > m {
                return Err(err_at(ln, format!("player {p} out of range 1..={m}")));
            }
            let ls: Vec<String> = toks.map(|t| t.to_string()).collect();
            if ls.len() != counts[p - 1] {
                return Err(err_at(
                    ln,
                    format!("player {p} needs {} labels, got {}", counts[p - 1], ls.len()),
                ));
            }
            if labels[p - 1].is_some() {
                return Err(err_at(ln, format!("duplicate labels line for player {p}")));
            }
            labels[p - 1] = Some(ls);
        } else if let Some(rest) = line.strip_prefix("payoff ") {
            let (idx_part, pay_part) = rest
                .split_once(':')
                .ok_or_else(|| err_at(ln, "expected `payoff <i1> ... <im> : <r1> ... <rm>`"))?;
            let idx: Vec<usize> = idx_part
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| err_at(ln, "bad action index")))
                .collect::<Result<Vec<_>>>()?;
            if idx.len() != m {
                return Err(err_at(ln, format!("expected {m} action indices")));
            }
            let mut flat = 0usize;
            for (p, &a) in idx.iter().enumerate() {
                if a == 0 || a > counts[p] {
                    return Err(err_at(
                        ln,
                        format!("action index {a} of player {} out of range 1..={}", p + 1, counts[p]),
                    ));
                }
                flat = flat * counts[p] + (a - 1);
            }
            let pays: Vec<Rational> = pay_part
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()
                .map_err(|e| err_at(ln, e))?;
            if pays.len() != m {
                return Err(err_at(ln, format!("expected {m} payoffs")));
            }
            if payoffs[flat].is_some() {
                return Err(err_at(ln, "duplicate payoff line for this profile"));
            }
            payoffs[flat] = Some(pays);
            seen_payoffs += 1;
        } else {
            return Err(err_at(ln, format!("unrecognized line `{line}`")));
        }
    }

    let labels: Vec<Vec<String>> = labels
        .into_iter()
        .enumerate()
        .map(|(p, l)| l.ok_or_else(|| Error::Syntax(format!("missing labels for player {}", p + 1))))
        .collect::<Result<_>>()?;
    if seen_payoffs != cells {
        return Err(Error::Syntax(format!(
            "expected {cells} payoff lines, found {seen_payoffs}"
        )));
    }
    let payoffs: Vec<Vec<Rational>> = payoffs.into_iter().map(|p| p.unwrap()).collect();
    StrategicGame::new(labels, payoffs)
}

fn fmt_entry(w: &QuadAlgebraic) -> String {
    if let Some(r) = w.as_rational() {
        fmt_rational(r)
    } else {
        format!(
            "alg {} {} {}",
            fmt_rational(w.rational_part()),
            fmt_rational(w.radical_coeff()),
            w.radicand()
        )
    }
}

pub fn write_profile(profile: &MixedProfile) -> String {
    let mut out = String::new();
    for p in 0..profile.player_count() {
        let entries: Vec<String> = profile.strategy(p).iter().map(fmt_entry).collect();
        out.push_str(&entries.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_profile(text: &str) -> Result<MixedProfile> {
    let mut strategies = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut toks = line.split_whitespace().peekable();
        let mut row = Vec::new();
        while let Some(t) = toks.next() {
            if t == "alg" {
                let a = toks.next().ok_or_else(|| err_at(ln, "alg literal needs `a b d`"))?;
                let b = toks.next().ok_or_else(|| err_at(ln, "alg literal needs `a b d`"))?;
                let d = toks.next().ok_or_else(|| err_at(ln, "alg literal needs `a b d`"))?;
                let a = parse_rational(a).map_err(|e| err_at(ln, e))?;
                let b = parse_rational(b).map_err(|e| err_at(ln, e))?;
                let d: u64 = d.parse().map_err(|_| err_at(ln, "bad radicand"))?;
                row.push(QuadAlgebraic::new(a, b, d).map_err(|e| err_at(ln, e))?);
            } else {
                let r = parse_rational(t).map_err(|e| err_at(ln, e))?;
                row.push(QuadAlgebraic::rational(r));
            }
        }
        strategies.push(row);
    }
    MixedProfile::new(strategies)
}
