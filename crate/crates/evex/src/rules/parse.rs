//! Rule file parser.
//!
//! Grammar, one rule per line:
//!
//! ```text
//! rule <id>: <atom> (^ <atom>)* -> <atom> (^ <atom>)*
//! ```
//!
//! Atom forms are `Name(?v)`, `Name(?v, ?w)`, constants are double-quoted
//! surfaces, and `#` starts a comment.

use super::{Atom, Rule, RuleError, Term};

/// Parses a rule file; rules come back in file order. Head atoms must be
/// unary and every head variable must be bound in the body.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let rule = LineParser::new(line, line_no).parse()?;
        for variable in rule.head.iter().flat_map(Atom::variables) {
            if !rule.body.iter().any(|a| a.variables().any(|v| v == variable)) {
                return Err(RuleError::UnsafeRule {
                    rule: rule.id.clone(),
                    variable: variable.to_string(),
                });
            }
        }
        if rules.iter().any(|r: &Rule| r.id == rule.id) {
            return Err(RuleError::Parse {
                line: line_no,
                col: 1,
                message: format!("duplicate rule id {:?}", rule.id),
            });
        }
        rules.push(rule);
    }
    Ok(rules)
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

struct LineParser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: &'a str,
    line_no: usize,
}

impl<'a> LineParser<'a> {
    fn new(line: &'a str, line_no: usize) -> Self {
        LineParser {
            chars: line.char_indices().collect(),
            pos: 0,
            line,
            line_no,
        }
    }

    fn error(&self, message: impl Into<String>) -> RuleError {
        let col = self
            .chars
            .get(self.pos)
            .map(|(byte, _)| byte + 1)
            .unwrap_or(self.line.len() + 1);
        RuleError::Parse {
            line: self.line_no,
            col,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn eat(&mut self, expected: char) -> Result<(), RuleError> {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {expected:?}")))
        }
    }

    fn try_eat(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, RuleError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '-')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an identifier"));
        }
        Ok(self.chars[start..self.pos].iter().map(|(_, c)| c).collect())
    }

    fn keyword(&mut self, word: &str) -> Result<(), RuleError> {
        self.skip_ws();
        let ident = self.ident()?;
        if ident == word {
            Ok(())
        } else {
            Err(self.error(format!("expected {word:?}, found {ident:?}")))
        }
    }

    fn parse(mut self) -> Result<Rule, RuleError> {
        self.keyword("rule")?;
        let id = self.ident()?;
        self.eat(':')?;

        let mut body = Vec::new();
        self.skip_ws();
        if !self.arrow_next() {
            loop {
                body.push(self.atom()?);
                if !self.try_eat('^') {
                    break;
                }
            }
        }
        self.skip_ws();
        if !self.arrow_next() {
            return Err(self.error("expected '->'"));
        }
        self.pos += 2;

        let mut head = Vec::new();
        loop {
            let atom = self.atom()?;
            if atom.args.len() != 1 {
                return Err(self.error(format!(
                    "head atom {} must be a unary class or role atom",
                    atom.predicate
                )));
            }
            head.push(atom);
            if !self.try_eat('^') {
                break;
            }
        }
        self.skip_ws();
        if self.peek().is_some() {
            return Err(self.error("trailing input after rule"));
        }
        Ok(Rule { id, body, head })
    }

    fn arrow_next(&self) -> bool {
        matches!(
            (
                self.chars.get(self.pos).map(|(_, c)| *c),
                self.chars.get(self.pos + 1).map(|(_, c)| *c)
            ),
            (Some('-'), Some('>'))
        )
    }

    fn atom(&mut self) -> Result<Atom, RuleError> {
        let predicate = self.ident()?;
        self.eat('(')?;
        let mut args = vec![self.term()?];
        if self.try_eat(',') {
            args.push(self.term()?);
        }
        self.eat(')')?;
        if args.len() > 2 {
            return Err(self.error("atoms take at most two arguments"));
        }
        Ok(Atom { predicate, args })
    }

    fn term(&mut self) -> Result<Term, RuleError> {
        self.skip_ws();
        match self.peek() {
            Some('?') => {
                self.pos += 1;
                Ok(Term::Variable(self.ident()?))
            }
            Some('"') => {
                self.pos += 1;
                let start = self.pos;
                while self.peek().is_some_and(|c| c != '"') {
                    self.pos += 1;
                }
                if self.peek() != Some('"') {
                    return Err(self.error("unterminated string constant"));
                }
                let text: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
                self.pos += 1;
                Ok(Term::Constant(text))
            }
            _ => Err(self.error("expected ?variable or \"constant\"")),
        }
    }
}
