//! Small expression language for exact complex values.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := number | 'i' | 'e(' ['-'] number ')' | '(' expr ')'
//! ```
//!
//! `e(r)` is `exp(i pi r)` and numbers are decimals or fractions such as
//! `3/2` or `0.25`. Everything is evaluated in the smallest cyclotomic
//! field containing every root that appears.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use origami_ring::scalar::interval::parse_decimal;
use origami_ring::scalar::{CyclotomicElement, CyclotomicField, ExactScalar};

#[derive(Debug, Clone)]
enum Node {
    Num(BigRational),
    I,
    Root(BigRational),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Neg(Box<Node>),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error(&self, what: &str) -> String {
        format!("{what} at offset {}", self.pos)
    }

    fn expr(&mut self) -> Result<Node, String> {
        let mut node = if self.eat(b'-') {
            Node::Neg(Box::new(self.term()?))
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                node = Node::Add(Box::new(node), Box::new(self.term()?));
            } else if self.eat(b'-') {
                node = Node::Sub(Box::new(node), Box::new(self.term()?));
            } else {
                return Ok(node);
            }
        }
    }

    fn term(&mut self) -> Result<Node, String> {
        let mut node = self.factor()?;
        while self.eat(b'*') {
            node = Node::Mul(Box::new(node), Box::new(self.factor()?));
        }
        Ok(node)
    }

    fn number(&mut self) -> Result<BigRational, String> {
        self.peek();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || b"./".contains(&self.s[self.pos])) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii slice");
        parse_decimal(text).ok_or_else(|| self.error("expected a number"))
    }

    fn factor(&mut self) -> Result<Node, String> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let n = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(n)
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Node::I)
            }
            Some(b'e') => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return Err(self.error("expected '(' after e"));
                }
                let neg = self.eat(b'-');
                let r = self.number()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(Node::Root(if neg { -r } else { r }))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Node::Num(self.number()?)),
            _ => Err(self.error("unexpected input")),
        }
    }
}

fn order(n: &Node) -> BigInt {
    match n {
        Node::Num(_) => BigInt::one(),
        Node::I => BigInt::from(4),
        Node::Root(r) => r.denom() * BigInt::from(2),
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => order(a).lcm(&order(b)),
        Node::Neg(a) => order(a),
    }
}

fn eval(n: &Node, field: &std::sync::Arc<CyclotomicField>) -> CyclotomicElement {
    let m = field.order() as i64;
    match n {
        Node::Num(r) => CyclotomicElement::from_rational(field, r),
        Node::I => CyclotomicElement::root_of_unity(field, m / 4),
        Node::Root(r) => {
            // exp(i pi p/q) = zeta_m^{p m / (2q)}
            let k = r.numer() * BigInt::from(m) / (r.denom() * BigInt::from(2));
            CyclotomicElement::root_of_unity(field, k.to_i64().expect("small exponent"))
        }
        Node::Add(a, b) => eval(a, field).add(&eval(b, field)),
        Node::Sub(a, b) => eval(a, field).sub(&eval(b, field)),
        Node::Mul(a, b) => eval(a, field).mul(&eval(b, field)),
        Node::Neg(a) => eval(a, field).neg(),
    }
}

pub fn parse_value(text: &str) -> Result<ExactScalar, String> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let node = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    let n = order(&node);
    let n = n
        .to_u32()
        .filter(|&v| v <= 100_000)
        .ok_or_else(|| format!("cyclotomic order {n} is too large"))?;
    let v = eval(&node, &CyclotomicField::get(n));
    Ok(match v.as_rational() {
        Some(r) => ExactScalar::from(r),
        None => ExactScalar::from(v),
    })
}
