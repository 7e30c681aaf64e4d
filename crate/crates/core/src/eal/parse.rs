//! Text syntax for affine terms and types.
//!
//! ```text
//! t    ::= ident | '\' ident '.' t | '\!' ident '.' t | t t | '!' atom | '(' t ')'
//! type ::= "'" ident | type '-o' type | '!' type | 'forall' "'" ident '.' type | '(' type ')'
//! ```

use std::sync::Arc;

use super::term::ETerm;
use super::types::{bang, forall, lolli, EType};
use crate::stlc::parse::{is_ident_start, Cursor, ParseError};

fn type_var(c: &mut Cursor) -> Result<String, ParseError> {
    c.expect("'")?;
    c.ident()
}

fn parse_type_atom(c: &mut Cursor) -> Result<EType, ParseError> {
    match c.peek() {
        Some('(') => {
            c.expect("(")?;
            let t = parse_type_inner(c)?;
            c.expect(")")?;
            Ok(t)
        }
        Some('\'') => Ok(EType::Var(Arc::from(type_var(c)?))),
        Some('!') => {
            c.expect("!")?;
            Ok(bang(parse_type_atom(c)?))
        }
        _ => Err(c.error("expected a type")),
    }
}

fn parse_type_inner(c: &mut Cursor) -> Result<EType, ParseError> {
    if c.peek_str("forall") {
        c.expect("forall")?;
        let a = type_var(c)?;
        c.expect(".")?;
        return Ok(forall(&a, parse_type_inner(c)?));
    }
    let dom = parse_type_atom(c)?;
    if c.eat("-o") || c.eat("⊸") {
        Ok(lolli(dom, parse_type_inner(c)?))
    } else {
        Ok(dom)
    }
}

pub(crate) fn parse_etype_at(c: &mut Cursor) -> Result<EType, ParseError> {
    parse_type_inner(c)
}

pub fn parse_etype(src: &str) -> Result<EType, ParseError> {
    let mut c = Cursor::new(src);
    let t = parse_type_inner(&mut c)?;
    if !c.at_end() {
        return Err(c.error("trailing input after type"));
    }
    Ok(t)
}

fn parse_binders(c: &mut Cursor, bang: bool) -> Result<ETerm, ParseError> {
    let x: Arc<str> = Arc::from(c.ident()?);
    c.expect(".")?;
    let body = parse_term_inner(c)?;
    Ok(if bang { ETerm::BangAbs(x, Arc::new(body)) } else { ETerm::Abs(x, Arc::new(body)) })
}

/// One atom; the flag marks an abstraction, which extends to the right.
fn parse_atom(c: &mut Cursor) -> Result<Option<(ETerm, bool)>, ParseError> {
    Ok(match c.peek() {
        Some('\\') | Some('λ') => {
            c.pos += 1;
            let bang = c.eat("!");
            Some((parse_binders(c, bang)?, true))
        }
        Some('(') => {
            c.expect("(")?;
            let t = parse_term_inner(c)?;
            c.expect(")")?;
            Some((t, false))
        }
        Some('!') => {
            c.expect("!")?;
            match parse_atom(c)? {
                Some((t, abs)) => Some((ETerm::Bang(Arc::new(t)), abs)),
                None => return Err(c.error("expected a term after `!`")),
            }
        }
        Some(ch) if is_ident_start(ch) => Some((ETerm::Var(Arc::from(c.ident()?)), false)),
        _ => None,
    })
}

fn parse_term_inner(c: &mut Cursor) -> Result<ETerm, ParseError> {
    let mut acc: Option<ETerm> = None;
    while let Some((t, abs)) = parse_atom(c)? {
        acc = Some(match acc {
            None => t,
            Some(f) => ETerm::App(Arc::new(f), Arc::new(t)),
        });
        if abs {
            break;
        }
    }
    acc.ok_or_else(|| c.error("expected a term"))
}

pub fn parse_eterm(src: &str) -> Result<ETerm, ParseError> {
    let mut c = Cursor::new(src);
    let t = parse_term_inner(&mut c)?;
    if !c.at_end() {
        return Err(c.error("trailing input after term"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eal::encode::eal_encode_string;
    use crate::eal::term::{eapp, ebang, ebang_lam, elam, evar};
    use crate::eal::types::{str_type, tree_type, with_type};
    use crate::symbol::{Alphabet, Word};

    #[test]
    fn terms() {
        let t = parse_eterm("\\!x. !x").unwrap();
        assert!(t.alpha_eq(&ebang_lam("x", ebang(evar("x")))));
        let t = parse_eterm("(\\x. x) !(f y)").unwrap();
        assert!(t.alpha_eq(&eapp(elam("x", evar("x")), ebang(eapp(evar("f"), evar("y"))))));
        let t = parse_eterm("!\\x. x").unwrap();
        assert!(t.alpha_eq(&ebang(elam("x", evar("x")))));
        assert!(parse_eterm("!").is_err());
    }

    #[test]
    fn roundtrips() {
        let ab = Alphabet::from_chars("ab");
        let w = eal_encode_string(&Word::from_chars("abba"), &ab).unwrap();
        assert!(parse_eterm(&w.to_string()).unwrap().alpha_eq(&w));
        for ty in [str_type(2), tree_type(3), with_type(&[str_type(1), tree_type(1)], "b", "c")] {
            let back = parse_etype(&ty.to_string()).unwrap();
            assert!(back.alpha_eq(&ty), "{ty}");
        }
        assert!(parse_etype("'a -o").is_err());
    }
}
