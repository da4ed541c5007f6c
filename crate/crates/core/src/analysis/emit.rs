//! Aligned text, CSV and JSON renderings of row-shaped results.

use serde::Serialize;

use crate::error::Result;

pub trait Tabular: Serialize {
    const HEADERS: &'static [&'static str];

    fn cells(&self) -> Vec<String>;
}

pub fn to_text<T: Tabular>(rows: &[T]) -> String {
    let mut widths: Vec<usize> = T::HEADERS.iter().map(|h| h.len()).collect();
    let cells: Vec<Vec<String>> = rows.iter().map(Tabular::cells).collect();
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |row: Vec<&str>| {
        let padded: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = line(T::HEADERS.to_vec());
    out.push('\n');
    out.push_str(&line(
        widths
            .iter()
            .map(|&w| "-".repeat(w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    ));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

pub fn to_csv<T: Tabular>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(T::HEADERS)?;
    for row in rows {
        w.write_record(row.cells())?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut s = serde_json::to_string(rows)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: u32,
        b: String,
    }

    impl Tabular for Row {
        const HEADERS: &'static [&'static str] = &["a", "b"];

        fn cells(&self) -> Vec<String> {
            vec![self.a.to_string(), self.b.clone()]
        }
    }

    fn rows() -> Vec<Row> {
        vec![
            Row {
                a: 1,
                b: "x+1".into(),
            },
            Row {
                a: 10,
                b: "x^3+1".into(),
            },
        ]
    }

    #[test]
    fn text_is_aligned() {
        assert_eq!(to_text(&rows()), "a   b\n--  -----\n1   x+1\n10  x^3+1\n");
    }

    #[test]
    fn csv_and_json() {
        assert_eq!(to_csv(&rows()).unwrap(), "a,b\n1,x+1\n10,x^3+1\n");
        assert_eq!(
            to_json(&rows()).unwrap(),
            "[{\"a\":1,\"b\":\"x+1\"},{\"a\":10,\"b\":\"x^3+1\"}]\n"
        );
    }
}
