//! Small text-rendering helpers shared by the subcommands: aligned tables
//! for `--format table` and comma rows for `--format csv`.

use aswcover::gf::{FieldDesc, FqElem};
use aswcover::ratfunc::RatPoint;

/// Left-aligned monospace grid with a header row.
pub fn grid(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(cell.len());
            }
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        let line: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:w$}", c, w = widths[i]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    emit(
        &mut out,
        &headers.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
    );
    for row in rows {
        emit(&mut out, row);
    }
    out
}

/// One CSV line; cells are expected comma-free (scalars use digit encoding).
pub fn csv_rows(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `key = value` lines for scalar reports in table format.
pub fn kv_lines(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// A field element as a bare integer (prime field) or `[c0,c1,...]`.
pub fn fmt_elem(e: &FqElem) -> String {
    let coeffs = e.coeffs();
    if coeffs.iter().skip(1).all(|&x| x == 0) {
        coeffs.first().copied().unwrap_or(0).to_string()
    } else {
        let parts: Vec<String> = coeffs.iter().map(|x| x.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

/// The integer encoding Σ cᵢ·pⁱ of a field element (comma-free, CSV-safe).
pub fn encode_elem(f: &FieldDesc, e: &FqElem) -> u128 {
    let mut val: u128 = 0;
    for (i, &c) in e.coeffs().iter().enumerate() {
        val += c as u128 * (f.p() as u128).pow(i as u32);
    }
    val
}

/// "inf" or the scalar form of a finite point.
pub fn fmt_point(pt: &RatPoint) -> String {
    match pt {
        RatPoint::Infinity => "inf".to_string(),
        RatPoint::Finite(a) => fmt_elem(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_aligned() {
        let out = grid(
            &["a", "long"],
            &[vec!["1".into(), "2".into()], vec!["333".into(), "4".into()]],
        );
        assert_eq!(out, "a    long\n1    2\n333  4\n");
    }

    #[test]
    fn elem_formats() {
        let f = FieldDesc::new(3, 2, vec![1, 0, 1]).unwrap();
        assert_eq!(fmt_elem(&f.from_int(2)), "2");
        assert_eq!(fmt_elem(&f.elem(&[1, 2])), "[1,2]");
        assert_eq!(encode_elem(&f, &f.elem(&[1, 2])), 7);
        assert_eq!(fmt_point(&RatPoint::Infinity), "inf");
    }
}
