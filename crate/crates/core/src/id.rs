//! Opaque identifiers for objects, 1-cells and 2-cells.
//!
//! Text form:
//!
//! ```text
//! name        plain token, e.g. `a`, `f0`, `*`
//! [2,3,1]     permutation
//! (a,b)       tuple (product categories), `()` is the empty tuple
//! {a>b}       the arrow a -> b of a thin category
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Id {
    Name(Arc<str>),
    Perm(Perm),
    Tuple(Arc<[Id]>),
    Arrow(Arc<(Id, Id)>),
}

const RESERVED: &[char] = &['[', ']', '(', ')', '{', '}', '>', ',', ';', '"'];

impl Id {
    pub fn name(s: &str) -> Id {
        Id::Name(Arc::from(s))
    }

    /// The distinguished point `*`.
    pub fn star() -> Id {
        Id::name("*")
    }

    pub fn tuple(items: Vec<Id>) -> Id {
        Id::Tuple(Arc::from(items))
    }

    pub fn pair(a: Id, b: Id) -> Id {
        Id::tuple(vec![a, b])
    }

    pub fn arrow(src: Id, dst: Id) -> Id {
        Id::Arrow(Arc::new((src, dst)))
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            Id::Perm(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Id]> {
        match self {
            Id::Tuple(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Id, &Id)> {
        match self.as_tuple() {
            Some([a, b]) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_arrow(&self) -> Option<(&Id, &Id)> {
        match self {
            Id::Arrow(a) => Some((&a.0, &a.1)),
            _ => None,
        }
    }

    pub fn expect_perm(&self) -> Result<&Perm> {
        self.as_perm().ok_or_else(|| Error::InvalidInput(format!("{self} is not a permutation")))
    }

    pub fn expect_pair(&self) -> Result<(&Id, &Id)> {
        self.as_pair().ok_or_else(|| Error::InvalidInput(format!("{self} is not a pair")))
    }

    pub fn expect_arrow(&self) -> Result<(&Id, &Id)> {
        self.as_arrow().ok_or_else(|| Error::InvalidInput(format!("{self} is not an arrow")))
    }
}

impl From<Perm> for Id {
    fn from(p: Perm) -> Id {
        Id::Perm(p)
    }
}

impl From<&str> for Id {
    fn from(s: &str) -> Id {
        Id::name(s)
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Id::Name(s) => f.write_str(s),
            Id::Perm(p) => write!(f, "{p}"),
            Id::Tuple(items) => {
                f.write_str("(")?;
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            Id::Arrow(a) => write!(f, "{{{}>{}}}", a.0, a.1),
        }
    }
}

impl fmt::Debug for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> Error {
        Error::Parse { input: self.src.to_string(), reason: format!("{reason} at byte {}", self.pos) }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn id(&mut self) -> Result<Id> {
        match self.peek() {
            Some('[') => {
                let end = self.src[self.pos..].find(']').ok_or_else(|| self.err("unclosed '['"))?;
                let text = &self.src[self.pos..self.pos + end + 1];
                self.pos += end + 1;
                Ok(Id::Perm(text.parse()?))
            }
            Some('(') => {
                self.eat('(')?;
                let mut items = Vec::new();
                if self.peek() == Some(')') {
                    self.eat(')')?;
                    return Ok(Id::tuple(items));
                }
                loop {
                    items.push(self.id()?);
                    match self.peek() {
                        Some(',') => self.eat(',')?,
                        Some(')') => {
                            self.eat(')')?;
                            return Ok(Id::tuple(items));
                        }
                        _ => return Err(self.err("expected ',' or ')'")),
                    }
                }
            }
            Some('{') => {
                self.eat('{')?;
                let a = self.id()?;
                self.eat('>')?;
                let b = self.id()?;
                self.eat('}')?;
                Ok(Id::arrow(a, b))
            }
            _ => {
                let rest = &self.src[self.pos..];
                let len = rest
                    .find(|c: char| RESERVED.contains(&c) || c.is_whitespace())
                    .unwrap_or(rest.len());
                if len == 0 {
                    return Err(self.err("expected a name"));
                }
                self.pos += len;
                Ok(Id::name(&rest[..len]))
            }
        }
    }
}

impl FromStr for Id {
    type Err = Error;

    fn from_str(s: &str) -> Result<Id> {
        let mut p = Parser { src: s, pos: 0 };
        let id = p.id()?;
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(id)
    }
}

impl Serialize for Id {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Id {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Id, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for text in ["a", "*", "0", "[2,3,1]", "[]", "()", "(a,[2,1])", "{[1,2]>[2,1]}", "((a,*),{x>y})"] {
            let id: Id = text.parse().unwrap();
            assert_eq!(id.to_string(), text);
        }
    }

    #[test]
    fn structure() {
        let id: Id = "(f,[2,1])".parse().unwrap();
        let (f, s) = id.as_pair().unwrap();
        assert_eq!(f, &Id::name("f"));
        assert_eq!(s.as_perm().unwrap().images(), vec![2, 1]);
        let a: Id = "{x>y}".parse().unwrap();
        assert_eq!(a.as_arrow(), Some((&Id::name("x"), &Id::name("y"))));
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "(a", "{a>b", "[1,1]", "a b", "a)", "[x]"] {
            assert!(text.parse::<Id>().is_err(), "{text}");
        }
    }
}
