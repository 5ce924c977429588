use crate::error::{CliError, CliResult};

/// Parses `a:b:count` into `count` evenly spaced points including both ends.
pub fn parse_range(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Usage(format!("--xi expects a:b:count, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![a]);
    }
    let step = (b - a) / (count - 1) as f64;
    Ok((0..count).map(|k| if k == count - 1 { b } else { a + step * k as f64 }).collect())
}

/// Parses a comma-separated list of points.
pub fn parse_list(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Usage(format!("bad point {s:?} in --points")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_range("0.25:9:1").unwrap(), vec![0.25]);
        assert_eq!(*parse_range("0:0.3:7").unwrap().last().unwrap(), 0.3);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("a:1:2").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0.5, 1,-2e-1").unwrap(), vec![0.5, 1.0, -0.2]);
        assert!(parse_list("1,,2").is_err());
        assert!(parse_list("nan").is_err());
    }
}
