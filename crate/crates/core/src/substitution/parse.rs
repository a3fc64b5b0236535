//! Text and JSON input formats for substitutions.
//!
//! Text form: rules `head->image` (also `↦`, `→`) separated by whitespace,
//! `;`, `,` or newlines. When every head is a single character, images are
//! read character by character (`a->ab`). Otherwise images are either
//! bracketed token lists (`x1->[x1 y]`) or a run of heads matched greedily.
//! An optional first line `alphabet: a b c` fixes the letter order; without
//! it letters follow the order of the rule heads. `#` starts a comment.
//!
//! JSON form: `{"rules": {"a": ["a", "b"], "b": "a"}}`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Substitution, SubstitutionError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Erasing(String),
    UndefinedLetter(String),
    DuplicateRule(String),
    Syntax(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Erasing(l) => write!(f, "erasing rule: the image of {l} is empty"),
            ParseErrorKind::UndefinedLetter(l) => write!(f, "letter {l} has no rule"),
            ParseErrorKind::DuplicateRule(l) => write!(f, "duplicate rule for {l}"),
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Arrow,
    Open,
    Close,
    Colon,
    Newline,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Spanned> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let is_arrow = |i: usize| {
        matches!(chars[i], '↦' | '→') || (chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
    };
    let reserved = |c: char| c.is_whitespace() || matches!(c, ';' | ',' | '[' | ']' | ':' | '#');
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            })
        };
        if c == '\n' {
            push(&mut out, Tok::Newline);
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if is_arrow(i) {
            push(&mut out, Tok::Arrow);
            let w = if c == '-' { 2 } else { 1 };
            i += w;
            col += w;
            continue;
        }
        match c {
            '[' => push(&mut out, Tok::Open),
            ']' => push(&mut out, Tok::Close),
            ':' => push(&mut out, Tok::Colon),
            _ if reserved(c) => {}
            _ => {
                let start = i;
                while i < chars.len() && !reserved(chars[i]) && !is_arrow(i) {
                    i += 1;
                }
                let w: String = chars[start..i].iter().collect();
                col += i - start;
                push(&mut out, Tok::Word(w));
                continue;
            }
        }
        i += 1;
        col += 1;
    }
    out
}

enum Image {
    Bracketed(Vec<(String, usize, usize)>),
    Bare(String, usize, usize),
}

struct Rule {
    head: String,
    line: usize,
    column: usize,
    image: Image,
}

fn syntax(s: &Spanned, msg: impl Into<String>) -> ParseError {
    ParseError {
        line: s.line,
        column: s.column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

/// Parses the text or JSON form.
pub fn parse_substitution(text: &str) -> Result<Substitution, SubstitutionError> {
    if text.trim_start().starts_with('{') {
        return parse_json(text);
    }
    let toks = lex(text);
    let mut i = 0;
    let mut declared: Option<Vec<(String, usize, usize)>> = None;

    // Optional `alphabet: ...` up to the end of its line.
    let first = toks.iter().position(|t| t.tok != Tok::Newline);
    if let Some(f) = first {
        if toks[f].tok == Tok::Word("alphabet".into())
            && toks.get(f + 1).is_some_and(|t| t.tok == Tok::Colon)
        {
            i = f + 2;
            let mut letters = Vec::new();
            while i < toks.len() && toks[i].tok != Tok::Newline {
                match &toks[i].tok {
                    Tok::Word(w) => letters.push((w.clone(), toks[i].line, toks[i].column)),
                    _ => return Err(syntax(&toks[i], "expected a letter in the alphabet").into()),
                }
                i += 1;
            }
            declared = Some(letters);
        }
    }

    let toks: Vec<Spanned> = toks[i..]
        .iter()
        .filter(|t| t.tok != Tok::Newline)
        .cloned()
        .collect();
    let mut rules: Vec<Rule> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let Tok::Word(head) = &toks[i].tok else {
            return Err(syntax(&toks[i], "expected a rule head").into());
        };
        match toks.get(i + 1) {
            Some(t) if t.tok == Tok::Arrow => {}
            Some(t) => return Err(syntax(t, "expected an arrow").into()),
            None => return Err(syntax(&toks[i], "rule without an arrow").into()),
        }
        let erasing = || ParseError {
            line: toks[i].line,
            column: toks[i].column,
            kind: ParseErrorKind::Erasing(head.clone()),
        };
        let j = i + 2;
        let (image, next) = match toks.get(j).map(|t| &t.tok) {
            Some(Tok::Open) => {
                let mut items = Vec::new();
                let mut k = j + 1;
                loop {
                    match toks.get(k).map(|t| &t.tok) {
                        Some(Tok::Word(w)) => items.push((w.clone(), toks[k].line, toks[k].column)),
                        Some(Tok::Close) => break,
                        Some(_) => return Err(syntax(&toks[k], "unexpected token in image").into()),
                        None => return Err(syntax(&toks[j], "unclosed bracket").into()),
                    }
                    k += 1;
                }
                if items.is_empty() {
                    return Err(erasing().into());
                }
                (Image::Bracketed(items), k + 1)
            }
            Some(Tok::Word(w)) if toks.get(j + 1).map(|t| &t.tok) != Some(&Tok::Arrow) => {
                (Image::Bare(w.clone(), toks[j].line, toks[j].column), j + 1)
            }
            Some(Tok::Word(_)) | None => return Err(erasing().into()),
            Some(_) => return Err(syntax(&toks[j], "unexpected token in image").into()),
        };
        rules.push(Rule {
            head: head.clone(),
            line: toks[i].line,
            column: toks[i].column,
            image,
        });
        i = next;
    }
    if rules.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::Syntax("no rules".into()),
        }
        .into());
    }

    let mut head_index: HashMap<String, usize> = HashMap::new();
    for (n, r) in rules.iter().enumerate() {
        if head_index.insert(r.head.clone(), n).is_some() {
            return Err(ParseError {
                line: r.line,
                column: r.column,
                kind: ParseErrorKind::DuplicateRule(r.head.clone()),
            }
            .into());
        }
    }

    let letters: Vec<String> = match &declared {
        Some(d) => {
            let mut seen = HashMap::new();
            for (l, line, column) in d {
                if seen.insert(l.clone(), ()).is_some() {
                    return Err(ParseError {
                        line: *line,
                        column: *column,
                        kind: ParseErrorKind::Syntax(format!("letter {l} declared twice")),
                    }
                    .into());
                }
                if !head_index.contains_key(l) {
                    return Err(ParseError {
                        line: *line,
                        column: *column,
                        kind: ParseErrorKind::UndefinedLetter(l.clone()),
                    }
                    .into());
                }
            }
            if let Some(r) = rules.iter().find(|r| !seen.contains_key(&r.head)) {
                return Err(ParseError {
                    line: r.line,
                    column: r.column,
                    kind: ParseErrorKind::Syntax(format!("letter {} is not declared", r.head)),
                }
                .into());
            }
            d.iter().map(|(l, _, _)| l.clone()).collect()
        }
        None => rules.iter().map(|r| r.head.clone()).collect(),
    };
    let index: HashMap<&str, usize> = letters
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let compact = letters.iter().all(|l| l.chars().count() == 1);
    let max_len = letters.iter().map(|l| l.chars().count()).max().unwrap_or(1);

    let undefined = |l: String, line: usize, column: usize| ParseError {
        line,
        column,
        kind: ParseErrorKind::UndefinedLetter(l),
    };
    let mut images = vec![Vec::new(); letters.len()];
    for r in &rules {
        let mut img = Vec::new();
        match &r.image {
            Image::Bracketed(items) => {
                for (w, line, column) in items {
                    match index.get(w.as_str()) {
                        Some(&b) => img.push(b),
                        None => return Err(undefined(w.clone(), *line, *column).into()),
                    }
                }
            }
            Image::Bare(w, line, column) => {
                let cs: Vec<char> = w.chars().collect();
                let mut p = 0;
                while p < cs.len() {
                    // Greedy longest match; in compact mode this is one char.
                    let top = if compact {
                        1
                    } else {
                        max_len.min(cs.len() - p)
                    };
                    let hit = (1..=top).rev().find_map(|len| {
                        let t: String = cs[p..p + len].iter().collect();
                        index.get(t.as_str()).map(|&b| (b, len))
                    });
                    match hit {
                        Some((b, len)) => {
                            img.push(b);
                            p += len;
                        }
                        None => return Err(undefined(cs[p].to_string(), *line, column + p).into()),
                    }
                }
            }
        }
        images[index[r.head.as_str()]] = img;
    }
    Substitution::new(letters, images)
}

fn parse_json(text: &str) -> Result<Substitution, SubstitutionError> {
    let err = |line: usize, column: usize, msg: String| -> SubstitutionError {
        ParseError {
            line,
            column,
            kind: ParseErrorKind::Syntax(msg),
        }
        .into()
    };
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| err(e.line(), e.column(), e.to_string()))?;
    let Some(rules) = v.get("rules").and_then(|r| r.as_object()) else {
        return Err(err(
            1,
            1,
            "expected an object with a \"rules\" object".into(),
        ));
    };
    let letters: Vec<String> = rules.keys().cloned().collect();
    let index: HashMap<&str, usize> = letters
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let mut images = Vec::new();
    for (head, img) in rules {
        let tokens: Vec<String> = match img {
            serde_json::Value::Array(a) => a
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| err(1, 1, format!("image of {head} must hold strings")))
                })
                .collect::<Result<_, _>>()?,
            serde_json::Value::String(s) => s.chars().map(|c| c.to_string()).collect(),
            _ => {
                return Err(err(
                    1,
                    1,
                    format!("image of {head} must be a list or string"),
                ))
            }
        };
        if tokens.is_empty() {
            return Err(ParseError {
                line: 1,
                column: 1,
                kind: ParseErrorKind::Erasing(head.clone()),
            }
            .into());
        }
        let mut w = Vec::new();
        for t in tokens {
            match index.get(t.as_str()) {
                Some(&b) => w.push(b),
                None => {
                    return Err(ParseError {
                        line: 1,
                        column: 1,
                        kind: ParseErrorKind::UndefinedLetter(t),
                    }
                    .into())
                }
            }
        }
        images.push(w);
    }
    Substitution::new(letters, images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> ParseErrorKind {
        match parse_substitution(text) {
            Err(SubstitutionError::Parse(e)) => e.kind,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn fibonacci() {
        let s = parse_substitution("a->ab b->a").unwrap();
        assert_eq!(s.letters(), ["a", "b"]);
        assert_eq!(s.images(), [vec![0, 1], vec![0]]);
    }

    #[test]
    fn five_letters_and_separators() {
        let s = parse_substitution("1->213; 2->4,\n3 → 5 4↦1 5->21").unwrap();
        assert_eq!(s.to_rules_string(), "1->213 2->4 3->5 4->1 5->21");
    }

    #[test]
    fn letter_order_is_rule_order() {
        let s = parse_substitution("a->abdd b->bc d->a c->d").unwrap();
        assert_eq!(s.letters(), ["a", "b", "d", "c"]);
        let s = parse_substitution("alphabet: a b c d\na->abdd b->bc d->a c->d").unwrap();
        assert_eq!(s.letters(), ["a", "b", "c", "d"]);
    }

    #[test]
    fn multi_character_letters() {
        let s = parse_substitution("x1->[x1 y] y->x1").unwrap();
        assert_eq!(s.images(), [vec![0, 1], vec![0]]);
        let s = parse_substitution("x1->x1yy yy->x1").unwrap();
        assert_eq!(s.images(), [vec![0, 1], vec![0]]);
    }

    #[test]
    fn errors_with_positions() {
        assert_eq!(kind("a-> b->a"), ParseErrorKind::Erasing("a".into()));
        assert_eq!(
            kind("a->ab b->c"),
            ParseErrorKind::UndefinedLetter("c".into())
        );
        assert_eq!(
            kind("a->ab a->a"),
            ParseErrorKind::DuplicateRule("a".into())
        );
        assert!(matches!(kind("a->ab b"), ParseErrorKind::Syntax(_)));
        match parse_substitution("a->a\nb->ax") {
            Err(SubstitutionError::Parse(e)) => assert_eq!((e.line, e.column), (2, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_form() {
        let s = parse_substitution(r#"{"rules": {"a": ["a","b"], "b": "a"}}"#).unwrap();
        assert_eq!(s.images(), [vec![0, 1], vec![0]]);
        assert!(parse_substitution(r#"{"rules": {"a": []}}"#).is_err());
    }
}
