//! `--field` tower specifications: `p=<prime>` followed by any number of
//! `mod=<polynomial>` (extend by that modulus) or `deg=<n>` (extend by the
//! first irreducible of degree `n`), comma separated or split over repeated
//! flags.

use diamond_core::{Error, FieldCtx, Poly, Result};

/// Splits on commas outside brackets.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn bad(msg: String) -> Error {
    Error::Syntax { pos: 0, msg }
}

pub fn parse_tower(items: &[String]) -> Result<FieldCtx> {
    let mut ctx: Option<FieldCtx> = None;
    for item in items.iter().flat_map(|s| split_top(s)) {
        let item = item.trim();
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| bad(format!("field spec item `{item}` is not key=value")))?;
        match (key.trim(), &ctx) {
            ("p", None) => {
                let p = value
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not an integer")))?;
                ctx = Some(FieldCtx::prime(p)?);
            }
            ("p", Some(_)) => return Err(bad("`p=` may appear only once, first".into())),
            ("mod", Some(base)) => ctx = Some(base.extend(&Poly::parse(value, base)?)?),
            ("deg", Some(base)) => {
                let d = value
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not an integer")))?;
                ctx = Some(base.extension_of_degree(d)?);
            }
            (_, None) => return Err(bad("field spec must start with `p=`".into())),
            (k, _) => return Err(bad(format!("unknown field spec key `{k}`"))),
        }
    }
    ctx.ok_or_else(|| bad("empty field spec".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn towers() {
        let k = parse_tower(&["p=2,mod=x^2+x+1".into()]).unwrap();
        assert_eq!(k.cardinality(), 4);
        let k = parse_tower(&["p=2,mod=x^2+x+1".into(), "mod=x^3+x+[0,1]".into()]);
        assert!(matches!(k, Ok(_) | Err(Error::NotIrreducible)));
        assert_eq!(parse_tower(&["p=3,deg=2".into()]).unwrap().cardinality(), 9);
        assert!(parse_tower(&["p=4".into()]).is_err());
        assert!(parse_tower(&["mod=x".into()]).is_err());
        assert!(parse_tower(&["p=2,mod=x^2+1".into()]).is_err());
        assert_eq!(
            split_top("p=2,mod=x+[1,0],deg=2"),
            vec!["p=2", "mod=x+[1,0]", "deg=2"]
        );
    }
}
