//! The line-oriented model file format.
//!
//! ```text
//! mc | mdp | game
//! state <id> [player1|player2]
//! init <id>
//! edge <src> -> <dst> prob <rational> weight <rational>            (mc)
//! edge <src> <action> -> <dst> prob <rational> weight <rational>   (mdp)
//! edge <src> -> <dst> weight <rational>                            (game)
//! ```
//!
//! `#` starts a comment. The MDP action may also be written `[action]`.
//! Parsing runs in two passes so edges may mention states declared later.
//! MDP actions are indexed in lexicographic order of their names, which
//! makes printing then parsing the identity on parsed models.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;
use wmp_core::rational::parse_rational;
use wmp_core::{
    Choice, GameEdge, MarkovChain, McEdge, Mdp, Model, ModelError, Player, Rational, Transition, TwoPlayerGame,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
}

impl ParseError {
    /// Syntax errors are parse failures; the rest are validation failures.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ParseError::Syntax { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Mc,
    Mdp,
    Game,
}

#[derive(Debug, Clone)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { text: &code[s..i], column: code[..s].chars().count() + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

struct Line<'a> {
    number: usize,
    toks: Vec<Token<'a>>,
    /// Column just past the last token, for "expected more" diagnostics.
    end: usize,
}

impl<'a> Line<'a> {
    fn syntax(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.number, column, message: message.into() }
    }

    fn get(&self, i: usize, what: &str) -> Result<&Token<'a>, ParseError> {
        self.toks.get(i).ok_or_else(|| self.syntax(self.end, format!("expected {what}")))
    }

    fn keyword(&self, i: usize, word: &str) -> Result<(), ParseError> {
        let t = self.get(i, &format!("`{word}`"))?;
        if t.text != word {
            return Err(self.syntax(t.column, format!("expected `{word}`, found `{}`", t.text)));
        }
        Ok(())
    }

    fn rational(&self, i: usize, what: &str) -> Result<Rational, ParseError> {
        let t = self.get(i, what)?;
        parse_rational(t.text).ok_or_else(|| self.syntax(t.column, format!("`{}` is not a rational (int or int/int)", t.text)))
    }

    fn ident(&self, i: usize, what: &str) -> Result<&'a str, ParseError> {
        let t = self.get(i, what)?;
        if t.text == "->" || t.text.starts_with('[') {
            return Err(self.syntax(t.column, format!("expected {what}, found `{}`", t.text)));
        }
        Ok(t.text)
    }

    fn done(&self, i: usize) -> Result<(), ParseError> {
        match self.toks.get(i) {
            Some(t) => Err(self.syntax(t.column, format!("unexpected `{}`", t.text))),
            None => Ok(()),
        }
    }
}

struct EdgeLine<'a> {
    line: usize,
    src: &'a str,
    action: Option<&'a str>,
    dst: &'a str,
    prob: Option<Rational>,
    weight: Rational,
}

pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    let lines: Vec<Line<'_>> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            let toks = tokens(l);
            let end = toks.last().map_or(1, |t| t.column + t.text.chars().count());
            Line { number: i + 1, toks, end }
        })
        .filter(|l| !l.toks.is_empty())
        .collect();
    let Some(head) = lines.first() else {
        return Err(ParseError::Syntax { line: 1, column: 1, message: "empty model, expected `mc`, `mdp` or `game`".into() });
    };
    let kind = match head.toks[0].text {
        "mc" => Kind::Mc,
        "mdp" => Kind::Mdp,
        "game" => Kind::Game,
        other => return Err(head.syntax(1, format!("expected `mc`, `mdp` or `game`, found `{other}`"))),
    };
    head.done(1)?;

    // pass 1: declarations and syntax
    let mut names: Vec<String> = Vec::new();
    let mut decl_line: Vec<usize> = Vec::new();
    let mut owners: Vec<Player> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut init: Option<(&str, usize)> = None;
    let mut edges: Vec<EdgeLine<'_>> = Vec::new();
    for l in &lines[1..] {
        let first = &l.toks[0];
        match first.text {
            "state" => {
                let id = l.ident(1, "a state id")?;
                match (kind, l.toks.get(2).map(|t| t.text)) {
                    (Kind::Game, Some("player1")) => owners.push(Player::One),
                    (Kind::Game, Some("player2")) => owners.push(Player::Two),
                    (Kind::Game, _) => {
                        return Err(l.syntax(l.toks.get(2).map_or(l.end, |t| t.column), "expected `player1` or `player2`"))
                    }
                    (_, Some("player1" | "player2")) => {
                        return Err(l.syntax(l.toks[2].column, "player tags are only allowed in games"))
                    }
                    _ => {}
                }
                l.done(if kind == Kind::Game { 3 } else { 2 })?;
                if index.contains_key(id) {
                    return Err(ParseError::Semantic { line: l.number, message: format!("duplicate state `{id}`") });
                }
                index.insert(id, names.len());
                names.push(id.to_string());
                decl_line.push(l.number);
            }
            "init" => {
                let id = l.ident(1, "a state id")?;
                l.done(2)?;
                if init.is_some() {
                    return Err(ParseError::Semantic { line: l.number, message: "`init` appears twice".into() });
                }
                init = Some((id, l.number));
            }
            "edge" => {
                let src = l.ident(1, "a source state")?;
                let mut i = 2;
                let action = if kind == Kind::Mdp {
                    let t = l.get(2, "an action")?;
                    i = 3;
                    let a = t.text.strip_prefix('[').and_then(|a| a.strip_suffix(']')).unwrap_or(t.text);
                    if a.is_empty() || a == "->" || a.contains(['[', ']']) {
                        return Err(l.syntax(t.column, "expected an action name"));
                    }
                    Some(a)
                } else {
                    None
                };
                l.keyword(i, "->")?;
                let dst = l.ident(i + 1, "a target state")?;
                i += 2;
                let prob = if kind == Kind::Game {
                    None
                } else {
                    l.keyword(i, "prob")?;
                    i += 2;
                    Some(l.rational(i - 1, "a probability")?)
                };
                l.keyword(i, "weight")?;
                let weight = l.rational(i + 1, "a weight")?;
                l.done(i + 2)?;
                edges.push(EdgeLine { line: l.number, src, action, dst, prob, weight });
            }
            other => return Err(l.syntax(first.column, format!("unknown directive `{other}`"))),
        }
    }

    // pass 2: resolution and validation
    if names.is_empty() {
        return Err(ParseError::Semantic { line: head.number, message: "model declares no states".into() });
    }
    let (init_id, init_line) =
        init.ok_or_else(|| ParseError::Semantic { line: head.number, message: "missing `init` line".into() })?;
    let resolve = |id: &str, line: usize| {
        index.get(id).copied().ok_or_else(|| ParseError::Semantic { line, message: format!("unknown state `{id}`") })
    };
    let initial = resolve(init_id, init_line)?;
    let mut seen: BTreeMap<(usize, Option<&str>, usize), usize> = BTreeMap::new();
    let mut first_line: BTreeMap<(usize, Option<&str>), usize> = BTreeMap::new();
    let mut sums: BTreeMap<(usize, Option<&str>), Rational> = BTreeMap::new();
    let mut resolved = Vec::with_capacity(edges.len());
    for e in &edges {
        let s = resolve(e.src, e.line)?;
        let t = resolve(e.dst, e.line)?;
        if let Some(prev) = seen.insert((s, e.action, t), e.line) {
            return Err(ParseError::Semantic {
                line: e.line,
                message: format!("duplicate edge {} -> {} (first on line {prev})", e.src, e.dst),
            });
        }
        if let Some(p) = &e.prob {
            if *p <= Rational::from_integer(0.into()) {
                return Err(ParseError::Semantic { line: e.line, message: format!("probability {p} is not positive") });
            }
            first_line.entry((s, e.action)).or_insert(e.line);
            *sums.entry((s, e.action)).or_insert_with(|| Rational::from_integer(0.into())) += p;
        }
        resolved.push((s, t));
    }
    for ((s, action), sum) in &sums {
        if *sum != Rational::from_integer(1.into()) {
            let what = match action {
                Some(a) => format!("state `{}` action `{a}`", names[*s]),
                None => format!("state `{}`", names[*s]),
            };
            return Err(ParseError::Semantic {
                line: first_line[&(*s, *action)],
                message: format!("probability sum of {what} is {sum}, expected 1"),
            });
        }
    }
    let mut has_out = vec![false; names.len()];
    for &(s, _) in &resolved {
        has_out[s] = true;
    }
    if let Some(s) = has_out.iter().position(|h| !h) {
        let rule = if kind == Kind::Mdp { "no enabled action" } else { "no outgoing edge" };
        return Err(ParseError::Semantic { line: decl_line[s], message: format!("state `{}` has {rule}", names[s]) });
    }

    let model = match kind {
        Kind::Mc => Model::Mc(MarkovChain::new(
            names,
            initial,
            edges
                .iter()
                .zip(&resolved)
                .map(|(e, &(s, t))| McEdge::new(s, t, e.prob.clone().expect("mc edge"), e.weight.clone()))
                .collect(),
        )?),
        Kind::Game => Model::Game(TwoPlayerGame::new(
            names,
            owners,
            initial,
            edges.iter().zip(&resolved).map(|(e, &(s, t))| GameEdge::new(s, t, e.weight.clone())).collect(),
        )?),
        Kind::Mdp => {
            let action_names: Vec<String> =
                edges.iter().filter_map(|e| e.action).collect::<BTreeSet<_>>().into_iter().map(String::from).collect();
            let action_index: HashMap<&str, usize> =
                action_names.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
            let mut groups: Vec<BTreeMap<usize, Vec<Transition>>> = vec![BTreeMap::new(); names.len()];
            for (e, &(s, t)) in edges.iter().zip(&resolved) {
                let a = action_index[e.action.expect("mdp edge")];
                groups[s]
                    .entry(a)
                    .or_default()
                    .push(Transition::new(t, e.prob.clone().expect("mdp edge"), e.weight.clone()));
            }
            let choices = groups
                .into_iter()
                .map(|g| g.into_iter().map(|(action, transitions)| Choice { action, transitions }).collect())
                .collect();
            Model::Mdp(Mdp::new(names, action_names, initial, choices)?)
        }
    };
    Ok(model)
}

/// Canonical text of a model; [`parse_model`] reads it back.
pub fn print_model(model: &Model) -> String {
    let mut out = String::new();
    match model {
        Model::Mc(mc) => {
            out.push_str("mc\n");
            for n in mc.names() {
                let _ = writeln!(out, "state {n}");
            }
            let _ = writeln!(out, "init {}", mc.name(mc.initial()));
            for e in mc.edges() {
                let _ = writeln!(out, "edge {} -> {} prob {} weight {}", mc.name(e.src), mc.name(e.dst), e.prob, e.weight);
            }
        }
        Model::Mdp(m) => {
            out.push_str("mdp\n");
            for n in m.state_names() {
                let _ = writeln!(out, "state {n}");
            }
            let _ = writeln!(out, "init {}", m.state_name(m.initial()));
            for s in 0..m.num_states() {
                for c in m.choices(s) {
                    for t in &c.transitions {
                        let _ = writeln!(
                            out,
                            "edge {} {} -> {} prob {} weight {}",
                            m.state_name(s),
                            m.action_name(c.action),
                            m.state_name(t.dst),
                            t.prob,
                            t.weight
                        );
                    }
                }
            }
        }
        Model::Game(g) => {
            out.push_str("game\n");
            for v in 0..g.num_vertices() {
                let tag = match g.owner(v) {
                    Player::One => "player1",
                    Player::Two => "player2",
                };
                let _ = writeln!(out, "state {} {tag}", g.name(v));
            }
            let _ = writeln!(out, "init {}", g.name(g.initial()));
            for e in g.edges() {
                let _ = writeln!(out, "edge {} -> {} weight {}", g.name(e.src), g.name(e.dst), e.weight);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use wmp_core::rational::{int, ratio};

    const THIRDS: &str = "mc\nstate a\nstate b\nstate c\ninit a\n\
        edge a -> a prob 1/3 weight 0\nedge a -> b prob 1/3 weight 1\nedge a -> c prob 1/3 weight -1/2\n\
        edge b -> b prob 1 weight 0\nedge c -> c prob 1 weight 0\n";

    #[test]
    fn thirds_sum_to_one() {
        let Model::Mc(mc) = parse_model(THIRDS).unwrap() else { panic!("kind") };
        assert_eq!(mc.edges()[2].weight, ratio(-1, 2));
    }

    #[test]
    fn short_sum_is_rejected() {
        let text = THIRDS.replace("edge a -> c prob 1/3 weight -1/2\n", "");
        let err = parse_model(&text).unwrap_err();
        assert!(err.to_string().contains("probability sum"), "{err}");
        assert_eq!(err, ParseError::Semantic { line: 6, message: "probability sum of state `a` is 2/3, expected 1".into() });
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let err = parse_model("mc\nstate a\ninit a\nedge a -> a prob x weight 0\n").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 4, column: 18, message: "`x` is not a rational (int or int/int)".into() });
        let err = parse_model("mc\nstate a\ninit a\nedge a => a prob 1 weight 0\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 4, column: 8, .. }), "{err}");
        assert!(parse_model("mx\n").unwrap_err().is_syntax());
    }

    #[test]
    fn semantic_errors() {
        let dangling = "mc\nstate a\ninit a\nedge a -> b prob 1 weight 0\n";
        assert_eq!(parse_model(dangling).unwrap_err(), ParseError::Semantic { line: 4, message: "unknown state `b`".into() });
        let dup = "game\nstate a player1\ninit a\nedge a -> a weight 0\nedge a -> a weight 1\n";
        assert!(matches!(parse_model(dup).unwrap_err(), ParseError::Semantic { line: 5, .. }));
        let untagged = "game\nstate a\ninit a\nedge a -> a weight 0\n";
        assert!(parse_model(untagged).unwrap_err().is_syntax());
        assert!(parse_model("mc\nstate a\n").is_err());
    }

    #[test]
    fn mdp_actions_with_and_without_brackets() {
        let text = "# comment\nmdp\nstate s  # trailing\nstate t\ninit s\n\
            edge s [go] -> t prob 1 weight 2\nedge s stay -> s prob 1 weight 0\nedge t go -> t prob 1 weight 1\n";
        let Model::Mdp(m) = parse_model(text).unwrap() else { panic!("kind") };
        assert_eq!(m.action_names(), ["go".to_string(), "stay".to_string()]);
        assert_eq!(m.choices(0).len(), 2);
        assert_eq!(m.choice(0, 0).unwrap().transitions[0].weight, int(2));
        let printed = print_model(&Model::Mdp(m.clone()));
        assert_eq!(parse_model(&printed).unwrap(), Model::Mdp(m));
    }

    #[test]
    fn forward_references_are_allowed() {
        let text = "mc\ninit b\nedge b -> a prob 1 weight 0\nstate b\nedge a -> a prob 1 weight 3\nstate a\n";
        let Model::Mc(mc) = parse_model(text).unwrap() else { panic!("kind") };
        assert_eq!(mc.initial(), 0);
        assert_eq!(mc.name(1), "a");
    }
}
