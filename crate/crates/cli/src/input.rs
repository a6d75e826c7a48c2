//! Text formats for models, sections, places and Gram matrices.

use ellsurf_core::funcfield::{parse_poly, parse_quadratic_in, parse_ratfunc_in, ParseError, Place, RatFunc, Rational};
use ellsurf_core::lattices::{Lattice, RootLatticeLabel};
use ellsurf_core::mordell_weil::Section;
use ellsurf_core::weierstrass::{WeierstrassError, WeierstrassModel};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid model: {0}")]
    Validation(#[from] WeierstrassError),
    #[error("{0}")]
    Format(String),
}

const KEYS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];

/// Blanks out `#` comments so that byte offsets stay valid.
fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| match l.find('#') {
            Some(i) => format!("{}{}", &l[..i], " ".repeat(l.len() - i)),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses `a1=… a2=… a3=… a4=… a6=…`; missing coefficients are zero.
///
/// Entries may be separated by spaces or newlines. The model is validated:
/// the discriminant must not vanish and some fibre must be singular.
pub fn parse_model(text: &str) -> Result<WeierstrassModel, InputError> {
    let clean = strip_comments(text);
    // Expressions never contain the letter `a`, so each `a` starts an entry.
    let starts: Vec<usize> = clean.match_indices('a').map(|(i, _)| i).collect();
    if let Some(first) = clean.find(|c: char| !c.is_whitespace()) {
        if starts.first() != Some(&first) {
            return Err(ParseError::at(text, first, "expected a coefficient such as a4=").into());
        }
    } else {
        return Err(ParseError::at(text, 0, "empty model").into());
    }
    let mut coeffs: [Option<RatFunc<Rational>>; 5] = Default::default();
    for (k, &start) in starts.iter().enumerate() {
        let end = starts.get(k + 1).copied().unwrap_or(clean.len());
        let entry = &clean[start..end];
        let eq = entry.find('=').ok_or_else(|| ParseError::at(text, start, "expected '=' after coefficient name"))?;
        let key = entry[..eq].trim();
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ParseError::at(text, start, format!("unknown coefficient '{key}'")))?;
        if coeffs[slot].is_some() {
            return Err(ParseError::at(text, start, format!("coefficient {key} given twice")).into());
        }
        coeffs[slot] = Some(parse_ratfunc_in(&clean, start + eq + 1, end)?);
    }
    let model = WeierstrassModel::from_ratfuncs(coeffs.map(|c| c.unwrap_or_else(RatFunc::zero)))?;
    model.globally_minimal()?;
    Ok(model)
}

/// Index of the top-level comma in `text[start..end]`.
fn top_level_comma(text: &str, start: usize, end: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text[start..end].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(start + i),
            _ => {}
        }
    }
    None
}

/// Parses lines `P = (x, y)`; blank lines and `#` comments are skipped.
pub fn parse_sections(text: &str) -> Result<Vec<(String, Section)>, InputError> {
    let clean = strip_comments(text);
    let mut out = Vec::new();
    let mut offset = 0;
    for line in clean.split('\n') {
        let base = offset;
        offset += line.len() + 1;
        if line.trim().is_empty() {
            continue;
        }
        let eq = line.find('=').ok_or_else(|| ParseError::at(text, base, "expected 'NAME = (x, y)'"))?;
        let name = line[..eq].trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
            return Err(ParseError::at(text, base, format!("invalid section name '{name}'")).into());
        }
        let body = &line[eq + 1..];
        let open = body.find('(').ok_or_else(|| ParseError::at(text, base + eq + 1, "expected '('"))?;
        let close = body.rfind(')').ok_or_else(|| ParseError::at(text, base + eq + 1, "expected ')'"))?;
        let inner_start = base + eq + 1 + open + 1;
        let inner_end = base + eq + 1 + close;
        if !body[..open].trim().is_empty() || !body[close + 1..].trim().is_empty() || inner_start > inner_end {
            return Err(ParseError::at(text, base + eq + 1, "expected '(x, y)'").into());
        }
        let comma = top_level_comma(&clean, inner_start, inner_end)
            .ok_or_else(|| ParseError::at(text, inner_start, "expected ',' between x and y"))?;
        let x = parse_quadratic_in(&clean, inner_start, comma, 't')?;
        let y = parse_quadratic_in(&clean, comma + 1, inner_end, 't')?;
        out.push((name.to_string(), Section::new(x, y)));
    }
    Ok(out)
}

/// `inf`, or a monic irreducible polynomial in `t`. Non-monic input is normalised.
pub fn parse_place(text: &str) -> Result<Place, InputError> {
    let text = text.trim();
    if matches!(text, "inf" | "infinity" | "∞") {
        return Ok(Place::Infinity);
    }
    let p = parse_poly(text)?;
    Place::finite(p.monic()).map_err(|e| InputError::Format(e.to_string()))
}

/// Gram matrix as a JSON array of integer rows.
pub fn parse_gram(text: &str) -> Result<Lattice, InputError> {
    let rows: Vec<Vec<i64>> =
        serde_json::from_str(text).map_err(|e| InputError::Format(format!("Gram matrix: {e}")))?;
    Lattice::new(rows).map_err(|e| InputError::Format(e.to_string()))
}

/// Root lattice names such as `A4`, `D6`, `E8`.
pub fn parse_root(text: &str) -> Result<RootLatticeLabel, InputError> {
    let bad = || InputError::Format(format!("'{text}' is not a root lattice name"));
    let mut chars = text.trim().chars();
    let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let rank: u32 = chars.as_str().parse().map_err(|_| bad())?;
    RootLatticeLabel::new(family, rank).map_err(|e| InputError::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ellsurf_core::funcfield::parse_poly;

    #[test]
    fn model_with_newlines_and_comments() {
        let m = parse_model("# normal form\na1 = t - 12^3\na4 = -36*(t-1728)^3\na6=-(t-1728)^5\n").unwrap();
        assert_eq!(m.a2(), &RatFunc::zero());
        assert_eq!(m.a1(), &RatFunc::from_poly(parse_poly("t-1728").unwrap()));
    }

    #[test]
    fn model_errors_carry_positions() {
        let InputError::Parse(e) = parse_model("a4=1\na5=t").unwrap_err() else { panic!() };
        assert_eq!((e.line, e.column), (2, 1));
        assert!(matches!(parse_model("a4=1 a6=1"), Err(InputError::Validation(WeierstrassError::NoSingularFibre))));
        assert!(matches!(parse_model("a4=0"), Err(InputError::Validation(WeierstrassError::NotElliptic))));
        assert!(matches!(parse_model("a4=1 a4=2"), Err(InputError::Parse(_))));
        assert!(matches!(parse_model("x a4=1"), Err(InputError::Parse(_))));
    }

    #[test]
    fn sections() {
        let s = parse_sections("P = (-(t-1728)^2/36, (3+2*sqrt(2))*(t-1728)^3/216)\n\n# more\nQ=(0, 0)").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].0, "P");
        assert_eq!(s[0].1.radicand(), Some(2.into()));
        assert!(parse_sections("P = (t)").is_err());
        assert!(parse_sections("(t, 1)").is_err());
    }

    #[test]
    fn places_and_roots() {
        assert_eq!(parse_place("inf").unwrap(), Place::Infinity);
        assert_eq!(parse_place("2*t-2").unwrap(), Place::Finite(parse_poly("t-1").unwrap()));
        assert!(parse_place("t^2-1").is_err());
        assert_eq!(parse_root("d6").unwrap(), RootLatticeLabel::D(6));
        assert!(parse_root("E9").is_err());
    }
}
