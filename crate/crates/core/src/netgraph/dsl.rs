//! Line-oriented `.imz` network description language.
//!
//! ```text
//! # nested interferometer, outer arm only
//! source s0
//! splitter BS1 s0 -> e c t=0.8164965809277260
//! phase phi_c c phi=pi/2
//! mirror C c -> C z=0
//! splitter BS4 F C -> dump2 det t=0.5773502691896258
//! detector det
//! dump dump2
//! ```
//!
//! Splitters take one or two inputs; the first input transmits to the first
//! output. Angles accept `pi` arithmetic (`-pi/2`, `3*pi/4`, `2pi`).

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::network::{Network, NetworkBuilder, NetworkError};

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    Network(NetworkError),
}

/// Diagnostic with a 1-based line and column.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => f.write_str(msg),
            ParseErrorKind::Network(err) => write!(f, "{err}"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &code[s..i], column: code[..s].chars().count() + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &code[s..], column: code[..s].chars().count() + 1 });
    }
    tokens
}

struct LineCtx<'a> {
    line: usize,
    tokens: Vec<Token<'a>>,
    end_column: usize,
}

impl<'a> LineCtx<'a> {
    fn err_at(&self, column: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, kind: ParseErrorKind::Syntax(msg.into()) }
    }

    fn token(&self, i: usize, what: &str) -> Result<Token<'a>, ParseError> {
        self.tokens
            .get(i)
            .copied()
            .ok_or_else(|| self.err_at(self.end_column, alloc::format!("expected {what}")))
    }

    fn ident(&self, i: usize, what: &str) -> Result<Token<'a>, ParseError> {
        let tok = self.token(i, what)?;
        let ok = tok.text != "->"
            && tok.text.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-'));
        if ok {
            Ok(tok)
        } else {
            Err(self.err_at(tok.column, alloc::format!("invalid {what} `{}`", tok.text)))
        }
    }

    fn arrow(&self, i: usize) -> Result<(), ParseError> {
        let tok = self.token(i, "`->`")?;
        if tok.text == "->" {
            Ok(())
        } else {
            Err(self.err_at(tok.column, alloc::format!("expected `->`, found `{}`", tok.text)))
        }
    }

    fn finish(&self, used: usize) -> Result<(), ParseError> {
        match self.tokens.get(used) {
            None => Ok(()),
            Some(tok) => Err(self.err_at(tok.column, alloc::format!("unexpected token `{}`", tok.text))),
        }
    }

    /// `key=value` token; the returned value is the text after `=`.
    fn keyed(&self, i: usize, key: &str) -> Result<(Token<'a>, &'a str), ParseError> {
        let tok = self.token(i, &alloc::format!("`{key}=`"))?;
        match tok.text.split_once('=') {
            Some((k, v)) if k == key && !v.is_empty() => Ok((tok, v)),
            _ => Err(self.err_at(tok.column, alloc::format!("expected `{key}=<value>`, found `{}`", tok.text))),
        }
    }

    fn number(&self, tok: Token<'a>, value: &str) -> Result<f64, ParseError> {
        parse_angle(value).map_err(|msg| self.err_at(tok.column, msg))
    }
}

/// Parse a `.imz` document into a validated [`Network`].
pub fn parse_network(text: &str) -> Result<Network, ParseError> {
    let mut builder = NetworkBuilder::default();
    let mut seen_labels: BTreeMap<String, usize> = BTreeMap::new();
    let mut mentions: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut source_at: Option<usize> = None;
    let mut detector_at: Option<usize> = None;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let ctx = LineCtx { line: line_no, end_column: raw.chars().count() + 1, tokens };
        let head = ctx.tokens[0];
        let mut mention = |tok: Token<'_>| {
            mentions.entry(tok.text.to_string()).or_insert((line_no, tok.column));
        };
        let mut claim_label = |tok: Token<'_>| -> Result<(), ParseError> {
            if let Some(prev) = seen_labels.insert(tok.text.to_string(), line_no) {
                return Err(ParseError {
                    line: line_no,
                    column: tok.column,
                    kind: ParseErrorKind::Syntax(alloc::format!(
                        "duplicate label `{}` (first defined on line {prev})",
                        tok.text
                    )),
                });
            }
            Ok(())
        };

        match head.text {
            "source" => {
                let seg = ctx.ident(1, "segment")?;
                ctx.finish(2)?;
                if let Some(prev) = source_at {
                    return Err(ctx.err_at(head.column, alloc::format!("second source (first on line {prev})")));
                }
                source_at = Some(line_no);
                mention(seg);
                builder.source(seg.text);
            }
            "splitter" => {
                let name = ctx.ident(1, "splitter name")?;
                let arrow = ctx
                    .tokens
                    .iter()
                    .position(|t| t.text == "->")
                    .ok_or_else(|| ctx.err_at(ctx.end_column, "expected `->`"))?;
                if !(3..=4).contains(&arrow) {
                    let col = ctx.tokens.get(2).map_or(ctx.end_column, |t| t.column);
                    return Err(ctx.err_at(col, "splitter takes one or two input segments"));
                }
                let mut inputs = Vec::new();
                for i in 0..arrow - 2 {
                    let tok = ctx.ident(2 + i, "input segment")?;
                    mention(tok);
                    inputs.push(tok.text);
                }
                let out_t = ctx.ident(arrow + 1, "transmitted output segment")?;
                let out_r = ctx.ident(arrow + 2, "reflected output segment")?;
                let (t_tok, t_text) = ctx.keyed(arrow + 3, "t")?;
                ctx.finish(arrow + 4)?;
                let t = ctx.number(t_tok, t_text)?;
                if !(0.0..=1.0).contains(&t) {
                    return Err(ParseError {
                        line: line_no,
                        column: t_tok.column,
                        kind: ParseErrorKind::Network(NetworkError::SplitterOutOfRange {
                            label: name.text.to_string(),
                            t,
                        }),
                    });
                }
                claim_label(name)?;
                mention(name);
                mention(out_t);
                mention(out_r);
                builder.splitter(name.text, &inputs, out_t.text, out_r.text, t);
            }
            "phase" => {
                let name = ctx.ident(1, "phase name")?;
                let seg = ctx.ident(2, "segment")?;
                let (tok, value) = ctx.keyed(3, "phi")?;
                ctx.finish(4)?;
                let phi = ctx.number(tok, value)?;
                claim_label(name)?;
                mention(name);
                mention(seg);
                builder.phase(name.text, seg.text, phi);
            }
            "mirror" => {
                let tag = ctx.ident(1, "mirror tag")?;
                let input = ctx.ident(2, "input segment")?;
                ctx.arrow(3)?;
                let output = ctx.ident(4, "output segment")?;
                let z = if ctx.tokens.len() > 5 {
                    let (tok, value) = ctx.keyed(5, "z")?;
                    ctx.finish(6)?;
                    ctx.number(tok, value)?
                } else {
                    0.0
                };
                claim_label(tag)?;
                mention(tag);
                mention(input);
                mention(output);
                builder.mirror(tag.text, input.text, output.text, z);
            }
            "junction" => {
                let name = ctx.ident(1, "junction name")?;
                let input = ctx.ident(2, "input segment")?;
                ctx.arrow(3)?;
                let output = ctx.ident(4, "output segment")?;
                ctx.finish(5)?;
                claim_label(name)?;
                mention(name);
                mention(input);
                mention(output);
                builder.junction(name.text, input.text, output.text);
            }
            "detector" | "dump" => {
                let tok = ctx.token(1, "segment")?;
                ctx.finish(2)?;
                let seg_text = match tok.text.split_once('=') {
                    Some((name, seg)) if !name.is_empty() && !seg.is_empty() => seg,
                    Some(_) => return Err(ctx.err_at(tok.column, "expected `<name>=<segment>`")),
                    None => tok.text,
                };
                let seg = Token { text: seg_text, column: tok.column + (tok.text.len() - seg_text.len()) };
                let seg = {
                    let probe = LineCtx { line: line_no, end_column: ctx.end_column, tokens: alloc::vec![seg] };
                    probe.ident(0, "segment")?
                };
                if head.text == "detector" {
                    if let Some(prev) = detector_at {
                        return Err(ParseError {
                            line: line_no,
                            column: head.column,
                            kind: ParseErrorKind::Network(NetworkError::MultipleDetectors(alloc::format!(
                                "{} (first on line {prev})",
                                seg.text
                            ))),
                        });
                    }
                    detector_at = Some(line_no);
                    builder.detector(seg.text);
                } else {
                    builder.dump(seg.text);
                }
                mention(seg);
            }
            other => {
                return Err(ctx.err_at(head.column, alloc::format!("unknown directive `{other}`")));
            }
        }
    }

    builder.build().map_err(|err| {
        let label = match &err {
            NetworkError::DuplicateLabel(l)
            | NetworkError::DanglingSegment(l)
            | NetworkError::MultipleProducers(l)
            | NetworkError::MultipleConsumers(l)
            | NetworkError::NonFinite(l)
            | NetworkError::TerminalConsumed(l)
            | NetworkError::DuplicateTerminal(l)
            | NetworkError::Cycle(l)
            | NetworkError::UnknownSegment(l) => Some(l.as_str()),
            NetworkError::SplitterOutOfRange { label, .. } => Some(label.as_str()),
            _ => None,
        };
        let (line, column) = label.and_then(|l| mentions.get(l).copied()).unwrap_or((last_line, 1));
        ParseError { line, column, kind: ParseErrorKind::Network(err) }
    })
}

/// Evaluate an angle literal: a float or `pi` arithmetic with `+ - * /` and parentheses.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let mut p = AngleParser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(alloc::format!("invalid number `{text}`"));
    }
    if !v.is_finite() {
        return Err(alloc::format!("non-finite value `{text}`"));
    }
    Ok(v)
}

struct AngleParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl AngleParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, String> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc *= self.factor()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc /= self.factor()?;
                }
                // implicit product: `2pi`, `3(pi/4)`
                Some(b'p') | Some(b'(') => acc *= self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, String> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err("unbalanced parenthesis".to_string());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'p') => {
                if self.src[self.pos..].starts_with(b"pi") {
                    self.pos += 2;
                    Ok(core::f64::consts::PI)
                } else {
                    Err("invalid number".to_string())
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign = matches!(c, b'+' | b'-')
                        && self.pos > start
                        && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let s = core::str::from_utf8(&self.src[start..self.pos]).map_err(|_| "invalid number".to_string())?;
                s.parse::<f64>().map_err(|_| alloc::format!("invalid number `{s}`"))
            }
            _ => Err("invalid number".to_string()),
        }
    }
}
