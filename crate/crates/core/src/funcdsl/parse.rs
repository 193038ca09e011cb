//! Recursive-descent parser for the term grammar.
//!
//! ```text
//! term := "id" | "const(" nat ")" | "add(" nat ")" | "sub(" nat ")"
//!       | "mul(" nat ")" | "div(" nat ")" | "mod(" nat ")"
//!       | "piecewise(" set "," term "," term ")" | "compose(" term "," term ")"
//!       | "next(" set ")" | "dup(" set "," nat ")"
//! ```

use super::{FuncTerm, TermError};
use crate::paramsets::parse_set;
use crate::syntax::Cursor;

pub(super) fn parse_term(src: &str) -> Result<FuncTerm, TermError> {
    let mut cur = Cursor::new(src);
    let t = term(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

pub(crate) fn term(cur: &mut Cursor<'_>) -> Result<FuncTerm, TermError> {
    cur.skip_ws();
    let at = cur.position();
    let name = cur.ident()?;
    if name == "id" {
        return Ok(FuncTerm::identity());
    }
    cur.expect("(")?;
    let t = match name {
        "const" => FuncTerm::constant(cur.nat()?),
        "add" => FuncTerm::add(cur.nat()?),
        "sub" => FuncTerm::sub(cur.nat()?),
        "mul" => FuncTerm::mul(cur.nat()?)?,
        "div" => FuncTerm::div_floor(cur.nat()?)?,
        "mod" => FuncTerm::modulo(cur.nat()?)?,
        "piecewise" => {
            let guard = parse_set(cur)?;
            cur.expect(",")?;
            let then = term(cur)?;
            cur.expect(",")?;
            let otherwise = term(cur)?;
            FuncTerm::piecewise(guard, then, otherwise)
        }
        "compose" => {
            let outer = term(cur)?;
            cur.expect(",")?;
            let inner = term(cur)?;
            FuncTerm::compose(outer, inner)
        }
        "next" => FuncTerm::next_in(parse_set(cur)?)?,
        "dup" => {
            let set = parse_set(cur)?;
            cur.expect(",")?;
            FuncTerm::dup(set, cur.nat()?)
        }
        other => {
            return Err(crate::ParseError {
                position: at,
                message: format!("unknown term constructor `{other}`"),
            }
            .into())
        }
    };
    cur.expect(")")?;
    Ok(t)
}
