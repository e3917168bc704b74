//! Probe literals for `simulate`.

use chandisc::{Error, Probe, PureState2, PureState4, Result, C64};

fn err(token: &str, reason: &str) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

fn args(token: &str, body: &str) -> Result<Vec<f64>> {
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| err(t.trim(), "not a finite number"))
        })
        .collect::<Result<Vec<f64>>>()
        .map_err(|e| match e {
            Error::Parse { .. } => e,
            _ => err(token, "bad arguments"),
        })
}

/// `0`, `1`, `bloch(theta,phi)`, `schmidt(t,eta)`, or `state(re,im,...)`
/// with 2 or 4 normalized amplitudes.
pub fn parse_probe(input: &str) -> Result<Probe> {
    let s = input.trim();
    match s {
        "0" | "|0>" => return Ok(Probe::Single(PureState2::basis(false))),
        "1" | "|1>" => return Ok(Probe::Single(PureState2::basis(true))),
        _ => {}
    }
    let (head, rest) = s
        .split_once('(')
        .ok_or_else(|| err(s, "expected `name(...)`"))?;
    let body = rest
        .strip_suffix(')')
        .ok_or_else(|| err(s, "missing closing parenthesis"))?;
    let v = args(s, body)?;
    match (head.trim(), v.as_slice()) {
        ("bloch", [t, p]) => Ok(Probe::Single(PureState2::from_bloch(*t, *p))),
        ("schmidt", [t, e]) => Ok(Probe::Entangled(PureState4::schmidt(*t, *e))),
        ("state", [a, b, c, d]) => Ok(Probe::Single(
            PureState2::new(C64::new(*a, *b), C64::new(*c, *d))
                .map_err(|e| err(s, &e.to_string()))?,
        )),
        ("state", x) if x.len() == 8 => {
            let a = [0, 2, 4, 6].map(|i| C64::new(x[i], x[i + 1]));
            Ok(Probe::Entangled(
                PureState4::new(a).map_err(|e| err(s, &e.to_string()))?,
            ))
        }
        ("bloch" | "schmidt" | "state", _) => Err(err(s, "wrong number of arguments")),
        (h, _) => Err(err(h, "unknown probe")),
    }
}
