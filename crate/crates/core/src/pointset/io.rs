//! Point-set files: JSON `{"n": .., "points": [[..], ..]}` with one array per
//! point, or CSV with one point per line. Coordinates are `"p/q"` or `"p"`
//! literals (JSON numbers are accepted for integers).

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::PointConfiguration;
use crate::error::{Error, ParseError};
use crate::exactmat::{format_rational, RatMatrix};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    n: usize,
    points: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

fn literal(v: &Value) -> Result<String, ParseError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(x) if x.is_i64() || x.is_u64() => Ok(x.to_string()),
        other => Err(ParseError::Format(format!("coordinate must be a string or integer, got {other}"))),
    }
}

fn from_point_rows(n: usize, rows: Vec<Vec<String>>) -> Result<PointConfiguration, Error> {
    if let Some((i, p)) = rows.iter().enumerate().find(|(_, p)| p.len() != n) {
        return Err(ParseError::Format(format!("point {i} has {} coordinates, expected {n}", p.len())).into());
    }
    let points = RatMatrix::parse_rows(&rows)?;
    let coords = if rows.is_empty() {
        RatMatrix::zeros(n, 0)
    } else {
        points.transpose()
    };
    Ok(PointConfiguration::new(coords)?)
}

impl PointConfiguration {
    pub fn from_json_str(s: &str) -> Result<Self, Error> {
        let file: PointFile = serde_json::from_str(s).map_err(|e| ParseError::Format(e.to_string()))?;
        let rows = file
            .points
            .iter()
            .map(|p| p.iter().map(literal).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let g = from_point_rows(file.n, rows)?;
        Ok(match file.label {
            Some(l) => g.with_label(l),
            None => g,
        })
    }

    /// One point per line, comma separated; blank lines and `#` comments are
    /// skipped.
    pub fn from_csv_str(s: &str) -> Result<Self, Error> {
        let rows: Vec<Vec<String>> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.split(',').map(|x| x.trim().to_string()).collect())
            .collect();
        let n = rows.first().map_or(0, Vec::len);
        from_point_rows(n, rows)
    }

    /// Parses JSON if the text starts with `{`, CSV otherwise.
    pub fn from_str_auto(s: &str) -> Result<Self, Error> {
        if s.trim_start().starts_with('{') {
            Self::from_json_str(s)
        } else {
            Self::from_csv_str(s)
        }
    }

    pub fn to_json_value(&self) -> Value {
        let points: Vec<Vec<Value>> = (0..self.r())
            .map(|j| self.point(j).iter().map(|x| Value::String(format_rational(x))).collect())
            .collect();
        let file = PointFile {
            n: self.n(),
            points,
            label: self.label().map(str::to_string),
        };
        serde_json::to_value(file).expect("point file serializes")
    }

    pub fn to_csv(&self) -> String {
        (0..self.r())
            .map(|j| {
                self.point(j)
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(",")
                    + "\n"
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::PointSetError;

    #[test]
    fn json_round_trip() {
        let g = PointConfiguration::tetrahedron_midpoints();
        let text = g.to_json_value().to_string();
        let back = PointConfiguration::from_json_str(&text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_with_fractions_and_numbers() {
        let g = PointConfiguration::from_json_str(r#"{"n": 2, "points": [["1/2", 1], [0, "3"], ["-1", "2/7"]]}"#).unwrap();
        assert_eq!((g.n(), g.r()), (2, 3));
        assert_eq!(g.to_csv(), "1/2,1\n0,3\n-1,2/7\n");
    }

    #[test]
    fn csv_round_trip() {
        let g = PointConfiguration::random_config(4, 6, 3, 9).unwrap();
        let back = PointConfiguration::from_csv_str(&g.to_csv()).unwrap();
        assert_eq!(back.coords(), g.coords());
        assert_eq!(PointConfiguration::from_str_auto(&g.to_csv()).unwrap().coords(), g.coords());
    }

    #[test]
    fn bad_files() {
        assert!(matches!(
            PointConfiguration::from_json_str(r#"{"n": 3, "points": [["1","2"]]}"#),
            Err(Error::Parse(ParseError::Format(_)))
        ));
        assert!(matches!(
            PointConfiguration::from_json_str(r#"{"n": 2, "points": [["1","x"]]}"#),
            Err(Error::Parse(ParseError::Rational(_)))
        ));
        assert!(matches!(
            PointConfiguration::from_json_str(r#"{"n": 2, "points": [["1","1"], ["2","2"]]}"#),
            Err(Error::PointSet(PointSetError::DuplicatePoint(0, 1)))
        ));
        assert!(matches!(
            PointConfiguration::from_csv_str("1,0\n0,0\n"),
            Err(Error::PointSet(PointSetError::ZeroPoint(1)))
        ));
        assert!(PointConfiguration::from_json_str(r#"{"n": 2, "pts": []}"#).is_err());
    }
}
