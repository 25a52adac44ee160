//! Text notation for the spaces handled by the crate.
//!
//! ```text
//! spec      := lens | orbifold | spaceform
//! lens      := "L" ["_" d] "(" q ";" item ("," item)* ")"
//! item      := int ["^" count]
//! orbifold  := "orbifold:" kind ":d=" d ":" [uint ("," uint)*]
//! kind      := "klein4" | "sym3" | "cyclic" N
//! spaceform := "spaceform:" ("Q8" | "P12" | "Q16" | "P20") ":m=" m ":h=" h
//! ```
//!
//! `L(q;...)` has dimension `2n - 1` for `n` items; `L_d(q;...)` states the
//! dimension explicitly and may describe an orbifold. `a^i` repeats `a`
//! `i` times and residues may be negative. Whitespace is accepted around
//! lens tokens and list separators. Parse errors report byte offsets into
//! the input; validation errors of well-formed input are passed through.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lens::LensParams;
use crate::molien::{group_from_lens, GroupModel};
use crate::orbifolds::{class_to_group, GroupKind, SmallGroupClass};
use crate::spaceforms::{self, FpfGroup, FpfGroupSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceSpec {
    Lens(LensParams),
    Orbifold(SmallGroupClass),
    SpaceForm(FpfGroupSpec),
}

impl SpaceSpec {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src, pos: 0 };
        p.ws();
        let spec = if p.rest().starts_with("orbifold:") {
            p.orbifold()?
        } else if p.rest().starts_with("spaceform:") {
            p.spaceform()?
        } else if p.rest().starts_with('L') {
            p.lens()?
        } else {
            return Err(p.err("expected 'L(', 'orbifold:' or 'spaceform:'"));
        };
        p.ws();
        if p.pos != src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(spec)
    }

    pub fn to_group(&self) -> Result<GroupModel> {
        match self {
            SpaceSpec::Lens(l) => Ok(group_from_lens(l)),
            SpaceSpec::Orbifold(c) => Ok(class_to_group(c)),
            SpaceSpec::SpaceForm(s) => spaceforms::roster(s),
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            SpaceSpec::Lens(l) => l.d(),
            SpaceSpec::Orbifold(c) => c.d(),
            SpaceSpec::SpaceForm(s) => s.dim(),
        }
    }

    /// Text that identifies the isometry class: the canonical form for lens
    /// spaces, the (already canonical) spec string otherwise.
    pub fn canonical_key(&self) -> String {
        match self {
            SpaceSpec::Lens(l) => l.canonicalize().to_string(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lens(l) => l.fmt(f),
            SpaceSpec::Orbifold(c) => c.fmt(f),
            SpaceSpec::SpaceForm(s) => s.fmt(f),
        }
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SpaceSpec::parse(s)
    }
}

impl From<LensParams> for SpaceSpec {
    fn from(l: LensParams) -> Self {
        SpaceSpec::Lens(l)
    }
}

/// Parses a lens spec; other kinds of spec are rejected.
pub fn parse_lens(src: &str) -> Result<LensParams> {
    match SpaceSpec::parse(src)? {
        SpaceSpec::Lens(l) => Ok(l),
        other => Err(Error::InvalidParameter(format!("{other} is not a lens space"))),
    }
}

const MAX_ITEMS: usize = 4096;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{tok}'")))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err("expected a number"));
        }
        let v = self.rest()[..digits]
            .parse::<u32>()
            .map_err(|_| self.err("number out of range"))?;
        self.pos += digits;
        Ok(v)
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat("-");
        let start = self.pos;
        let v = self.uint().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { offset: start, message },
            other => other,
        })? as i64;
        Ok(if neg { -v } else { v })
    }

    fn lens(&mut self) -> Result<SpaceSpec> {
        self.expect("L")?;
        let d = if self.eat("_") { Some(self.uint()?) } else { None };
        self.ws();
        self.expect("(")?;
        self.ws();
        let q = self.uint()?;
        self.ws();
        self.expect(";")?;
        let mut s = Vec::new();
        loop {
            self.ws();
            let a = self.int()?;
            self.ws();
            let count = if self.eat("^") {
                self.ws();
                let at = self.pos;
                let c = self.uint()?;
                if c == 0 || s.len() + c as usize > MAX_ITEMS {
                    self.pos = at;
                    return Err(self.err("repetition count out of range"));
                }
                c
            } else {
                1
            };
            s.extend(std::iter::repeat_n(a, count as usize));
            self.ws();
            if self.eat(")") {
                break;
            }
            self.expect(",").map_err(|_| self.err("expected ',' or ')'"))?;
        }
        let l = match d {
            Some(d) => LensParams::validate(d, q, &s)?,
            None => LensParams::validate(2 * s.len() as u32 - 1, q, &s)?,
        };
        Ok(SpaceSpec::Lens(l))
    }

    fn uint_list(&mut self) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        self.ws();
        if self.pos == self.src.trim_end().len() {
            return Ok(out);
        }
        loop {
            self.ws();
            out.push(self.uint()?);
            self.ws();
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn orbifold(&mut self) -> Result<SpaceSpec> {
        self.expect("orbifold:")?;
        let kind = if self.eat("klein4") {
            GroupKind::KleinFour
        } else if self.eat("sym3") {
            GroupKind::Sym3
        } else if self.eat("cyclic") {
            GroupKind::Cyclic(self.uint()?)
        } else {
            return Err(self.err("expected 'klein4', 'sym3' or 'cyclicN'"));
        };
        self.expect(":d=")?;
        let d = self.uint()?;
        self.expect(":")?;
        let params = self.uint_list()?;
        Ok(SpaceSpec::Orbifold(SmallGroupClass::new(d, kind, &params)?))
    }

    fn spaceform(&mut self) -> Result<SpaceSpec> {
        self.expect("spaceform:")?;
        let group = FpfGroup::ALL
            .into_iter()
            .find(|g| self.rest().starts_with(&g.to_string()))
            .ok_or_else(|| self.err("expected 'Q8', 'P12', 'Q16' or 'P20'"))?;
        self.pos += group.to_string().len();
        self.expect(":m=")?;
        let m = self.uint()?;
        self.expect(":h=")?;
        let h = self.uint()?;
        Ok(SpaceSpec::SpaceForm(FpfGroupSpec::new(group, m, h)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offset(src: &str) -> usize {
        match SpaceSpec::parse(src) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("{src:?} gave {other:?}"),
        }
    }

    #[test]
    fn lens_forms() {
        let a = parse_lens("L(11;1,2,3)").unwrap();
        assert_eq!((a.d(), a.q(), a.s()), (5, 11, &[1u32, 2, 3][..]));
        assert_eq!(parse_lens(" L ( 11 ; 1 , 2 , 3 ) ").unwrap(), a);
        assert_eq!(parse_lens("L(11;1,-9,3)").unwrap(), a);
        let b = parse_lens("L(7;1^3,2^2)").unwrap();
        assert_eq!(b.s(), &[1, 1, 1, 2, 2]);
        let c = parse_lens("L_4(5;1,2)").unwrap();
        assert_eq!(c.d(), 4);
        assert!(!c.is_space_form());
        let t = parse_lens("L(1;0,0,0)").unwrap();
        assert_eq!(t.d(), 5);
    }

    #[test]
    fn other_forms() {
        let k = SpaceSpec::parse("orbifold:klein4:d=5:2,1,1").unwrap();
        assert_eq!(k.dim(), 5);
        let s = SpaceSpec::parse("spaceform:P20:m=2:h=1").unwrap();
        assert_eq!(s.to_group().unwrap().order(), 20);
        let c = SpaceSpec::parse("orbifold:cyclic1:d=3:").unwrap();
        assert_eq!(c.to_group().unwrap().order(), 1);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(offset("L(11;1,2"), 8);
        assert_eq!(offset("L(11;1,x)"), 7);
        assert_eq!(offset("L(11;1,2,3) z"), 12);
        assert_eq!(offset("M(3;1)"), 0);
        assert_eq!(offset("orbifold:dihedral:d=3:1"), 9);
        assert_eq!(offset("spaceform:P21:m=1:h=0"), 10);
        assert_eq!(offset("L(7;1^0)"), 6);
        assert!(matches!(
            SpaceSpec::parse("L(12;2,4)"),
            Err(Error::GcdViolation { gcd: 2 })
        ));
        assert!(SpaceSpec::parse("spaceform:Q8:m=2:h=1").is_err());
    }

    #[test]
    fn display_round_trip() {
        for src in [
            "L(11;1,2,3)",
            "L_4(5;1,2)",
            "L_2(6;1)",
            "orbifold:klein4:d=5:2,1,1",
            "orbifold:sym3:d=4:1,2",
            "orbifold:cyclic1:d=3:",
            "spaceform:Q16:m=3:h=1",
        ] {
            let s = SpaceSpec::parse(src).unwrap();
            assert_eq!(s.to_string(), src);
            assert_eq!(SpaceSpec::parse(&s.to_string()).unwrap(), s);
        }
    }
}
