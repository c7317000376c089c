//! Line-oriented parser for the schedule language.

use std::collections::BTreeSet;

use super::{ErrorKind, Family, Mode, Pattern, Rule, RuleTarget, ScheduleError, SlotExpr, SlotPattern, TransitionSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LBracket,
    RBracket,
    Comma,
    Eq,
    Arrow,
    Ge,
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> ScheduleError {
    ScheduleError::new(ErrorKind::Syntax, line, col, msg)
}

fn lex(line_no: usize, line: &str) -> Result<Vec<Token>, ScheduleError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        let single = |tok| Token { tok, col };
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '[' | ']' | ',' | '=' | '+' => {
                out.push(single(match c {
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '=' => Tok::Eq,
                    _ => Tok::Plus,
                }));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(single(Tok::Arrow));
                i += 2;
            }
            '-' => {
                out.push(single(Tok::Minus));
                i += 1;
            }
            '>' if chars.get(i + 1) == Some(&'=') => {
                out.push(single(Tok::Ge));
                i += 2;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v = text.parse().map_err(|_| syntax(line_no, col, format!("integer {text} out of range")))?;
                out.push(single(Tok::Int(v)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(single(Tok::Ident(chars[start..i].iter().collect())));
            }
            other => return Err(syntax(line_no, col, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ScheduleError> {
        let col = self.col();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(self.line, col, format!("expected {what}"))),
        }
    }

    fn int(&mut self) -> Result<i64, ScheduleError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(v)) => Ok(v),
            _ => Err(syntax(self.line, col, "expected integer")),
        }
    }

    fn done(&self) -> Result<(), ScheduleError> {
        if self.pos < self.toks.len() {
            return Err(syntax(self.line, self.col(), "unexpected trailing input"));
        }
        Ok(())
    }

    fn family(&mut self) -> Result<Family, ScheduleError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) if s == "BASE" => Ok(Family::Base),
            Some(Tok::Ident(s)) if s == "G" => Ok(Family::G),
            Some(Tok::Ident(s)) if s == "B" => Ok(Family::B),
            _ => Err(syntax(self.line, col, "expected BASE, G or B")),
        }
    }

    /// `[item ("," item)*]`, returning each item with its column.
    fn bracketed<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ScheduleError>,
    ) -> Result<Vec<(T, usize)>, ScheduleError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut out = Vec::new();
        loop {
            let col = self.col();
            out.push((item(self)?, col));
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBracket) => return Ok(out),
                _ => return Err(syntax(self.line, self.col().saturating_sub(1).max(1), "expected ',' or ']'")),
            }
        }
    }

    fn slot_pattern(&mut self) -> Result<SlotPattern, ScheduleError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(v)) => Ok(SlotPattern::Exact(v)),
            Some(Tok::Ident(var)) => {
                if self.peek() == Some(&Tok::Ge) {
                    self.pos += 1;
                    Ok(SlotPattern::Guard { var, min: self.int()? })
                } else {
                    Ok(SlotPattern::Free { var })
                }
            }
            _ => Err(syntax(self.line, col, "expected integer or variable")),
        }
    }

    fn slot_expr(&mut self) -> Result<SlotExpr, ScheduleError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(v)) => Ok(SlotExpr::Abs(v)),
            Some(Tok::Ident(var)) => {
                let offset = match self.peek() {
                    Some(Tok::Plus) => {
                        self.pos += 1;
                        self.int()?
                    }
                    Some(Tok::Minus) => {
                        self.pos += 1;
                        -self.int()?
                    }
                    _ => 0,
                };
                Ok(SlotExpr::Var { var, offset })
            }
            _ => Err(syntax(self.line, col, "expected integer or variable")),
        }
    }
}

fn is_ident(tok: Option<&Tok>, word: &str) -> bool {
    matches!(tok, Some(Tok::Ident(s)) if s == word)
}

fn parse_rule(mode: Mode, line: usize, toks: &[Token], end_col: usize) -> Result<Rule, ScheduleError> {
    let mut cur = Cursor { toks, pos: 0, line, end_col };
    let arity = mode.arity();

    let family = cur.family()?;
    let mut slots = Vec::new();
    let mut bound: Vec<Option<String>> = Vec::new();
    if family != Family::Base {
        let start = cur.col();
        let items = cur.bracketed(Cursor::slot_pattern)?;
        if items.len() != arity {
            return Err(syntax(line, start, format!("{mode} mode takes {arity} index slot(s), found {}", items.len())));
        }
        let mut seen = BTreeSet::new();
        for (sp, col) in items {
            if let Some(v) = sp.var() {
                if !seen.insert(v.to_string()) {
                    return Err(syntax(line, col, format!("variable {v} bound twice")));
                }
            }
            bound.push(sp.var().map(str::to_string));
            slots.push(sp);
        }
    }
    let pattern = Pattern { family, slots };

    cur.expect(Tok::Arrow, "'->'")?;

    let tfamily = cur.family()?;
    let mut texprs = Vec::new();
    if tfamily != Family::Base {
        let start = cur.col();
        let items = cur.bracketed(Cursor::slot_expr)?;
        if items.len() != arity {
            return Err(syntax(line, start, format!("{mode} mode takes {arity} index slot(s), found {}", items.len())));
        }
        for (i, (e, col)) in items.into_iter().enumerate() {
            if let SlotExpr::Var { var, offset } = &e {
                if !bound.iter().flatten().any(|b| b == var) {
                    return Err(syntax(line, col, format!("variable {var} is not bound by the pattern")));
                }
                if bound.get(i).and_then(Option::as_deref) != Some(var.as_str()) {
                    return Err(ScheduleError::new(
                        ErrorKind::Unsupported,
                        line,
                        col,
                        format!("slot {} may only refer to the variable bound in the same slot", i + 1),
                    ));
                }
                if mode == Mode::Grid && *offset < 0 {
                    return Err(ScheduleError::new(
                        ErrorKind::Unsupported,
                        line,
                        col,
                        "negative offsets are not supported in grid mode",
                    ));
                }
            }
            texprs.push(e);
        }
    }
    cur.done()?;
    Ok(Rule { pattern, target: RuleTarget { family: tfamily, slots: texprs }, line, displayed_center: None })
}

/// Every section of a schedule file, in file order, sharing one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSet {
    pub mode: Mode,
    pub specs: Vec<TransitionSpec>,
}

impl ScheduleSet {
    pub fn get(&self, name: &str) -> Option<&TransitionSpec> {
        self.specs.iter().find(|s| s.name() == name)
    }
}

/// Parses and validates every section of a schedule file.
pub fn parse_schedule(text: &str) -> Result<ScheduleSet, ScheduleError> {
    let mut mode = None;
    let mut sections: Vec<(String, usize, Vec<Rule>)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let toks = lex(line, raw)?;
        let Some(first) = toks.first() else { continue };
        let end_col = raw.chars().count() + 1;

        if is_ident(Some(&first.tok), "mode") {
            if mode.is_some() {
                return Err(syntax(line, first.col, "mode declared twice"));
            }
            let mut cur = Cursor { toks: &toks, pos: 1, line, end_col };
            cur.expect(Tok::Eq, "'='")?;
            let col = cur.col();
            mode = Some(match cur.next() {
                Some(Tok::Ident(s)) if s == "linear" => Mode::Linear,
                Some(Tok::Ident(s)) if s == "grid" => Mode::Grid,
                _ => return Err(syntax(line, col, "expected 'linear' or 'grid'")),
            });
            cur.done()?;
            continue;
        }
        let Some(mode) = mode else {
            return Err(syntax(line, first.col, "expected 'mode = linear|grid' first"));
        };
        if first.tok == Tok::LBracket {
            let mut cur = Cursor { toks: &toks, pos: 1, line, end_col };
            let col = cur.col();
            let name = match cur.next() {
                Some(Tok::Ident(s)) => s,
                _ => return Err(syntax(line, col, "expected section name")),
            };
            cur.expect(Tok::RBracket, "']'")?;
            cur.done()?;
            if let Some((prev, _, rules)) = sections.last() {
                if rules.is_empty() {
                    return Err(syntax(line, 1, format!("section [{prev}] has no rules")));
                }
            }
            if sections.iter().any(|(n, _, _)| *n == name) {
                return Err(syntax(line, col, format!("section [{name}] defined twice")));
            }
            sections.push((name, line, Vec::new()));
            continue;
        }
        let Some((_, _, rules)) = sections.last_mut() else {
            return Err(syntax(line, first.col, "rule outside of a section"));
        };
        rules.push(parse_rule(mode, line, &toks, end_col)?);
    }

    let Some(mode) = mode else {
        return Err(syntax(last_line.max(1), 1, "missing 'mode = linear|grid'"));
    };
    match sections.last() {
        None => return Err(syntax(last_line.max(1), 1, "expected at least one section")),
        Some((name, line, rules)) if rules.is_empty() => {
            return Err(syntax(*line, 1, format!("section [{name}] has no rules")))
        }
        _ => {}
    }
    let specs = sections
        .into_iter()
        .map(|(name, _, rules)| TransitionSpec::new(name, mode, rules))
        .collect::<Result<_, _>>()?;
    Ok(ScheduleSet { mode, specs })
}

/// Parses a file holding exactly one section.
pub fn parse_spec(text: &str) -> Result<TransitionSpec, ScheduleError> {
    let mut set = parse_schedule(text)?;
    if set.specs.len() != 1 {
        return Err(syntax(1, 1, format!("expected exactly one section, found {}", set.specs.len())));
    }
    Ok(set.specs.remove(0))
}
