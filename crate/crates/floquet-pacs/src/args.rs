//! Parsers for the compact flag syntaxes: times, amplitudes, excitations,
//! grid axes and pins.

use floquet_pacs_core::C64;

use crate::error::{CliError, CliResult};

fn number(text: &str, what: &str) -> CliResult<f64> {
    let value: f64 = text
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("cannot parse {what} `{text}` as a number")))?;
    if !value.is_finite() {
        return Err(CliError::usage(format!("{what} `{text}` is not finite")));
    }
    Ok(value)
}

/// A real number or a fraction `a/b`.
fn rational(text: &str, what: &str) -> CliResult<(f64, f64)> {
    match text.split_once('/') {
        Some((a, b)) => {
            let den = number(b, what)?;
            if den == 0.0 {
                return Err(CliError::usage(format!("{what} `{text}` divides by zero")));
            }
            Ok((number(a, what)?, den))
        }
        None => Ok((number(text, what)?, 1.0)),
    }
}

/// One time: `1.5`, `T`, `0.25T`, `1/3T`, `T/4` or `3T/4`.
pub fn parse_time(text: &str, period: f64) -> CliResult<f64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(CliError::usage("empty time"));
    }
    let Some(pos) = s.find('T') else {
        let (a, b) = rational(s, "time")?;
        return Ok(a / b);
    };
    let (head, tail) = (&s[..pos], &s[pos + 1..]);
    let (num, den_head) = match head.trim() {
        "" => (1.0, 1.0),
        h => rational(h, "time")?,
    };
    let den_tail = match tail.trim() {
        "" => 1.0,
        t => match t.strip_prefix('/') {
            Some(d) => {
                let d = number(d, "time")?;
                if d == 0.0 {
                    return Err(CliError::usage(format!("time `{text}` divides by zero")));
                }
                d
            }
            None => return Err(CliError::usage(format!("cannot parse time `{text}`"))),
        },
    };
    Ok(num * period / (den_head * den_tail))
}

/// Comma-separated times, where an entry `start:stop:count` expands to
/// `count` equally spaced times including both ends.
pub fn parse_times(text: &str, period: f64) -> CliResult<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_time(single, period)?),
            [start, stop, count] => {
                let a = parse_time(start, period)?;
                let b = parse_time(stop, period)?;
                let n: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("cannot parse time count `{count}`")))?;
                match n {
                    0 => return Err(CliError::usage("a time range needs at least one point")),
                    1 => out.push(a),
                    _ => out.extend((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64)),
                }
            }
            _ => return Err(CliError::usage(format!("cannot parse time `{item}`"))),
        }
    }
    Ok(out)
}

/// `re,im;re,im;…` with one pair per mode.
pub fn parse_alpha(text: &str) -> CliResult<Vec<C64>> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').collect();
            match parts.as_slice() {
                [re, im] => Ok(C64::new(number(re, "alpha")?, number(im, "alpha")?)),
                _ => Err(CliError::usage(format!("alpha entry `{pair}` must be `re,im`"))),
            }
        })
        .collect()
}

/// `k,k,…` non-negative integers.
pub fn parse_excitations(text: &str) -> CliResult<Vec<u32>> {
    text.split(',')
        .map(|k| {
            k.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("excitation `{k}` is not a non-negative integer")))
        })
        .collect()
}

/// Index of an axis name `q1…qN, p1…pN` in the `(q, p)` ordering.
pub fn axis_index(name: &str, n_modes: usize) -> CliResult<usize> {
    let name = name.trim();
    let bad = || CliError::usage(format!("unknown axis `{name}` for {n_modes} mode(s)"));
    let (offset, digits) = match name.split_at_checked(1) {
        Some(("q", rest)) => (0, rest),
        Some(("p", rest)) => (n_modes, rest),
        _ => return Err(bad()),
    };
    let k: usize = digits.parse().map_err(|_| bad())?;
    if k == 0 || k > n_modes {
        return Err(bad());
    }
    Ok(offset + k - 1)
}

pub fn axis_name(index: usize, n_modes: usize) -> String {
    if index < n_modes {
        format!("q{}", index + 1)
    } else {
        format!("p{}", index - n_modes + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub index: usize,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

/// `axis=min:max:count` entries separated by commas.
pub fn parse_grid(text: &str, n_modes: usize) -> CliResult<Vec<AxisRange>> {
    text.split(',')
        .map(|item| {
            let (name, range) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("grid entry `{item}` must be `axis=min:max:count`")))?;
            let parts: Vec<&str> = range.split(':').collect();
            let [min, max, count] = parts.as_slice() else {
                return Err(CliError::usage(format!(
                    "grid entry `{item}` must be `axis=min:max:count`"
                )));
            };
            Ok(AxisRange {
                index: axis_index(name, n_modes)?,
                min: number(min, "grid bound")?,
                max: number(max, "grid bound")?,
                count: count
                    .trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("grid count `{count}` is not an integer")))?,
            })
        })
        .collect()
}

/// `axis=value` entries separated by commas.
pub fn parse_pins(text: &str, n_modes: usize) -> CliResult<Vec<(usize, f64)>> {
    text.split(',')
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("pin `{item}` must be `axis=value`")))?;
            Ok((axis_index(name, n_modes)?, number(value, "pin")?))
        })
        .collect()
}
