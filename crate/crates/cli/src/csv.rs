//! Trajectory export and observation import.

use std::fmt::Write as _;

use harrod::{Channel, Error, Result, Trajectory};

pub const TRAJECTORY_HEADER: &str = "tau,K,I,Y,C,Y_R,K_R,C_R";

const COLUMNS: [Channel; 7] = [
    Channel::Capital,
    Channel::Investment,
    Channel::Income,
    Channel::Consumption,
    Channel::RealizedIncome,
    Channel::RealizedCapital,
    Channel::RealizedConsumption,
];

/// Scientific notation with 12 significant digits and a signed two-digit
/// exponent, as C's `%.11e` prints it: `2.00000000000e+01`.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.11e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.unsigned_abs())
}

pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(trajectory.len() * 8 * 18 + 32);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (j, tau) in trajectory.grid.iter().enumerate() {
        out.push_str(&sci(*tau));
        for channel in COLUMNS {
            let _ = write!(out, ",{}", sci(trajectory.series(channel)[j]));
        }
        out.push('\n');
    }
    out
}

/// Reads a CSV with header `tau,value` into samples.
pub fn read_observations(text: &str) -> Result<Vec<(f64, f64)>> {
    let bad = |line: usize, key: &str, message: String| Error::Parse {
        line,
        key: key.to_string(),
        message,
    };
    let mut reader = ::csv::ReaderBuilder::new()
        .trim(::csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| bad(1, "header", e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != ["tau", "value"] {
        return Err(bad(
            1,
            "header",
            format!(
                "expected `tau,value`, got `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            bad(line, "record", e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |idx: usize, key: &str| -> Result<f64> {
            record[idx]
                .parse::<f64>()
                .map_err(|_| bad(line, key, format!("malformed number `{}`", &record[idx])))
        };
        samples.push((field(0, "tau")?, field(1, "value")?));
    }
    Ok(samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sci(20.0), "2.00000000000e+01");
        assert_eq!(sci(0.0), "0.00000000000e+00");
        assert_eq!(sci(-0.00125), "-1.25000000000e-03");
        assert_eq!(sci(1.05f64.powi(20)), "2.65329770514e+00");
        assert_eq!(sci(1e300), "1.00000000000e+300");
    }

    #[test]
    fn observations_parse() {
        let s = read_observations("tau,value\n1,1.5\n 2 , 2.5\n").unwrap();
        assert_eq!(s, vec![(1.0, 1.5), (2.0, 2.5)]);
        assert!(read_observations("t,v\n1,2\n").is_err());
        match read_observations("tau,value\n1,2\n2,x\n") {
            Err(Error::Parse { line, key, .. }) => assert_eq!((line, key.as_str()), (3, "value")),
            other => panic!("{other:?}"),
        }
    }
}
