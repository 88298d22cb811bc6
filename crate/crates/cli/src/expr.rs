//! Real-valued parameter expressions: decimals, `pi`, `sqrt(..)`, `+ - * /`
//! and parentheses, e.g. `8/sqrt(15)` or `pi/2`.

#[derive(Debug, PartialEq)]
pub struct ExprError(pub String);

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn eval(src: &str) -> Result<f64, ExprError> {
    let mut p = Parser {
        s: src.as_bytes(),
        i: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.i != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if !v.is_finite() {
        return Err(ExprError(format!("{src:?} does not evaluate to a finite number")));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError(format!("{msg} at offset {} in {:?}", self.i, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.s.get(self.i).is_some_and(u8::is_ascii_whitespace) {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<f64, ExprError> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                v += self.term()?;
            } else if self.eat(b'-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, ExprError> {
        let mut v = self.factor()?;
        loop {
            if self.eat(b'*') {
                v *= self.factor()?;
            } else if self.eat(b'/') {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64, ExprError> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        if self.eat(b'(') {
            let v = self.expr()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(v);
        }
        self.skip_ws();
        let start = self.i;
        if self.s.get(self.i).is_some_and(u8::is_ascii_alphabetic) {
            while self.s.get(self.i).is_some_and(u8::is_ascii_alphanumeric) {
                self.i += 1;
            }
            return match &self.s[start..self.i] {
                b"pi" => Ok(std::f64::consts::PI),
                b"sqrt" => {
                    if !self.eat(b'(') {
                        return Err(self.err("expected '(' after sqrt"));
                    }
                    let v = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    if v < 0.0 {
                        return Err(self.err("square root of a negative number"));
                    }
                    Ok(v.sqrt())
                }
                _ => {
                    self.i = start;
                    Err(self.err("unknown name"))
                }
            };
        }
        while self
            .s
            .get(self.i)
            .is_some_and(|c| c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E'))
        {
            // exponent sign
            if matches!(self.s[self.i], b'e' | b'E') && matches!(self.s.get(self.i + 1), Some(b'+' | b'-')) {
                self.i += 1;
            }
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or_else(|| self.err("expected a number"))
    }
}
