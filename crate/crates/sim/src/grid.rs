//! Value lists given on the command line: `a,b,c` or `start:step:stop`
//! (inclusive).

use crate::error::{Result, SimError};

fn bad(s: &str) -> SimError {
    SimError::Config(format!("cannot parse value list '{s}'"))
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [one] => one.split(',').map(|v| v.trim().parse::<f64>().map_err(|_| bad(s))).collect(),
        [start, step, stop] => {
            let (a, h, b) = (
                start.parse::<f64>().map_err(|_| bad(s))?,
                step.parse::<f64>().map_err(|_| bad(s))?,
                stop.parse::<f64>().map_err(|_| bad(s))?,
            );
            if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(bad(s));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize + 1;
            // Rounded so that 0.1 steps print as 10.2 rather than 10.199999999999999.
            Ok((0..count).map(|i| ((a + i as f64 * h) * 1e9).round() / 1e9).collect())
        }
        _ => Err(bad(s)),
    }
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [one] => one.split(',').map(|v| v.trim().parse::<usize>().map_err(|_| bad(s))).collect(),
        [start, step, stop] => {
            let (a, h, b) = (
                start.parse::<usize>().map_err(|_| bad(s))?,
                step.parse::<usize>().map_err(|_| bad(s))?,
                stop.parse::<usize>().map_err(|_| bad(s))?,
            );
            if h == 0 || b < a {
                return Err(bad(s));
            }
            Ok((a..=b).step_by(h).collect())
        }
        _ => Err(bad(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_f64_list("10, 12.5,14").unwrap(), vec![10.0, 12.5, 14.0]);
        assert_eq!(parse_f64_list("10:0.1:10.3").unwrap(), vec![10.0, 10.1, 10.2, 10.3]);
        assert_eq!(parse_f64_list("-1:0.5:0").unwrap(), vec![-1.0, -0.5, 0.0]);
        assert_eq!(parse_usize_list("5:5:20").unwrap(), vec![5, 10, 15, 20]);
        assert_eq!(parse_usize_list("1,3").unwrap(), vec![1, 3]);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "a", "1:0:3", "3:1:1", "1:2", "1:2:3:4"] {
            assert!(parse_f64_list(s).is_err(), "{s}");
        }
        assert!(parse_usize_list("5:0:9").is_err());
        assert!(parse_usize_list("-1").is_err());
    }
}
