//! Channel literals: `extremal(phi,theta)`, `mix(lambda;phi,theta;phi2,theta2)`
//! and the presets `identity`, `ad(phi)`, `pauli(lambda,theta,theta2)`.
//! Angles are radians.

use super::{ExtremalChannel, QubitChannel};
use crate::error::{Error, Result};

fn parse_err(token: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn number(tok: &str) -> Result<f64> {
    let t = tok.trim();
    let v: f64 = t
        .parse()
        .map_err(|_| parse_err(t, "not a decimal number"))?;
    if !v.is_finite() {
        return Err(parse_err(t, "not finite"));
    }
    Ok(v)
}

fn numbers<const N: usize>(group: &str) -> Result<[f64; N]> {
    let parts: Vec<&str> = group.split(',').collect();
    if parts.len() != N {
        return Err(parse_err(
            group.trim(),
            format!("expected {N} comma-separated values"),
        ));
    }
    let mut out = [0.0; N];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = number(p)?;
    }
    Ok(out)
}

fn extremal(group: &str) -> Result<ExtremalChannel> {
    let [phi, theta] = numbers::<2>(group)?;
    ExtremalChannel::new(phi, theta).map_err(|e| parse_err(group.trim(), e.to_string()))
}

/// Parse a channel literal. Errors name the offending token.
pub fn parse_channel(input: &str) -> Result<QubitChannel> {
    let s = input.trim();
    if s == "identity" {
        return Ok(QubitChannel::identity());
    }
    let (head, rest) = s
        .split_once('(')
        .ok_or_else(|| parse_err(s, "expected `name(...)`"))?;
    let body = rest
        .strip_suffix(')')
        .ok_or_else(|| parse_err(s, "missing closing parenthesis"))?;
    let wrap = |e: Error| match e {
        Error::Parse { .. } => e,
        other => parse_err(s, other.to_string()),
    };
    match head.trim() {
        "extremal" => Ok(extremal(body)?.into()),
        "ad" => {
            let [phi] = numbers::<1>(body)?;
            QubitChannel::amplitude_damping(phi).map_err(wrap)
        }
        "pauli" => {
            let [l, t, t2] = numbers::<3>(body)?;
            QubitChannel::pauli(l, t, t2).map_err(wrap)
        }
        "mix" => {
            let groups: Vec<&str> = body.split(';').collect();
            if groups.len() != 3 {
                return Err(parse_err(s, "expected `mix(lambda;phi,theta;phi2,theta2)`"));
            }
            let [l] = numbers::<1>(groups[0])?;
            QubitChannel::mixture(l, extremal(groups[1])?, extremal(groups[2])?).map_err(wrap)
        }
        other => Err(parse_err(other, "unknown channel kind")),
    }
}

impl std::str::FromStr for QubitChannel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_channel(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn parses_every_form() {
        let e = parse_channel("extremal(1.25,0)").unwrap();
        assert_eq!(e.lambda(), 1.0);
        assert_eq!(e.first().phi(), 1.25);

        let m = parse_channel(" mix(0.25; 0.1,0.2 ; 0.3,0.4) ").unwrap();
        assert_eq!(m.lambda(), 0.25);
        assert_eq!(m.second().theta(), 0.4);

        assert_eq!(parse_channel("identity").unwrap(), QubitChannel::identity());
        assert_eq!(parse_channel("ad(0.5)").unwrap().first().theta(), 0.0);
        let p = parse_channel("pauli(0.5,0.3,1.0)").unwrap();
        assert!((p.second().theta() - (PI - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn literal_round_trips() {
        for lit in ["extremal(0.5,2.25)", "mix(0.3;0.1,0.2;3,0)"] {
            let c = parse_channel(lit).unwrap();
            assert_eq!(parse_channel(&c.literal()).unwrap(), c);
        }
    }

    #[test]
    fn errors_name_the_token() {
        let err = |s: &str| match parse_channel(s) {
            Err(Error::Parse { token, .. }) => token,
            other => panic!("expected parse error for {s}, got {other:?}"),
        };
        assert_eq!(err("extremal(4.0,0)"), "4.0,0");
        assert_eq!(err("extremal(abc,0)"), "abc");
        assert_eq!(err("foo(1,2)"), "foo");
        assert_eq!(err("extremal(1,2,3)"), "1,2,3");
        assert_eq!(err("mix(2;0,0;0,0)"), "mix(2;0,0;0,0)");
        assert_eq!(err("extremal(1,2"), "extremal(1,2");
        assert_eq!(err("mix(0.5;0,0)"), "mix(0.5;0,0)");
    }
}
