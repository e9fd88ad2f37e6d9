//! CSV input and output.
//!
//! Curves: `t,re_1,im_1,...,re_n,im_n`, rows sorted by `t`.
//! Lifts: long format `t,branch,re,im` (`re_c,im_c` pairs for vector branches).
//! Tuples: `id,point,re_1,im_1,...`, the rows of one tuple consecutive.
//! Grids: `x,y,re_1,im_1,...` with an optional trailing `active` column of
//! `0`/`1`; nodes of the product grid without a row are inactive.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::grid2d::SampledGrid2D;
use crate::lifting::{LiftedCurve, LiftedGrid2D};
use crate::scalar::{Real, C};
use crate::tuple::AQPoint;

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Csv(e.to_string())
}

/// Checks `headers[offset..]` against `re_1,im_1,...` and returns `n`.
/// With `trailer`, a final column of that name is allowed.
fn complex_columns(headers: &csv::StringRecord, offset: usize, trailer: Option<&str>) -> Result<(usize, bool)> {
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let mut end = names.len();
    let mut has_trailer = false;
    if let Some(tr) = trailer {
        if names.last() == Some(&tr) {
            end -= 1;
            has_trailer = true;
        }
    }
    let count = end.saturating_sub(offset);
    if count == 0 || !count.is_multiple_of(2) {
        let col = names.get(end.max(offset)).or(names.last()).copied().unwrap_or("");
        return Err(Error::Csv(format!(
            "column {} `{col}`: expected pairs re_k,im_k after the leading columns",
            end.max(offset) + 1
        )));
    }
    for (pos, name) in names[offset..end].iter().enumerate() {
        let k = pos / 2 + 1;
        let expected = if pos % 2 == 0 {
            format!("re_{k}")
        } else {
            format!("im_{k}")
        };
        if *name != expected {
            return Err(Error::Csv(format!(
                "column {} `{name}`: expected `{expected}`",
                offset + pos + 1
            )));
        }
    }
    Ok((count / 2, has_trailer))
}

fn expect_leading(headers: &csv::StringRecord, leading: &[&str]) -> Result<()> {
    for (i, want) in leading.iter().enumerate() {
        let got = headers.get(i).map(str::trim).unwrap_or("");
        if got != *want {
            return Err(Error::Csv(format!("column {} `{got}`: expected `{want}`", i + 1)));
        }
    }
    Ok(())
}

fn field<T: Real>(rec: &csv::StringRecord, headers: &csv::StringRecord, col: usize, row: usize) -> Result<T> {
    let raw = rec.get(col).unwrap_or("").trim();
    raw.parse::<f64>().map(T::lit).map_err(|_| {
        Error::Csv(format!(
            "row {row}, column `{}`: `{raw}` is not a number",
            headers.get(col).unwrap_or("?")
        ))
    })
}

fn complex_fields<T: Real>(
    rec: &csv::StringRecord,
    headers: &csv::StringRecord,
    offset: usize,
    n: usize,
    row: usize,
) -> Result<Vec<C<T>>> {
    (0..n)
        .map(|k| {
            Ok(C::new(
                field(rec, headers, offset + 2 * k, row)?,
                field(rec, headers, offset + 2 * k + 1, row)?,
            ))
        })
        .collect()
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r)
}

fn records<R: Read>(rdr: &mut csv::Reader<R>) -> Result<Vec<csv::StringRecord>> {
    rdr.records()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(csv_err)
}

pub fn read_curve<T: Real, R: Read>(r: R) -> Result<SampledCurve<T>> {
    let mut rdr = reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    expect_leading(&headers, &["t"])?;
    let (n, _) = complex_columns(&headers, 1, None)?;
    let mut nodes = Vec::new();
    let mut values = Vec::new();
    for (row, rec) in records(&mut rdr)?.iter().enumerate() {
        nodes.push(field(rec, &headers, 0, row + 1)?);
        values.push(complex_fields(rec, &headers, 1, n, row + 1)?);
    }
    SampledCurve::new(nodes, values)
}

pub fn write_curve<T: Real, W: Write>(curve: &SampledCurve<T>, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string()];
    for k in 1..=curve.dim() {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    wtr.write_record(&header).map_err(csv_err)?;
    for (t, v) in curve.nodes().iter().zip(curve.values()) {
        let mut row = vec![t.to_string()];
        for z in v {
            row.push(z.re.to_string());
            row.push(z.im.to_string());
        }
        wtr.write_record(&row).map_err(csv_err)?;
    }
    wtr.flush().map_err(csv_err)
}

pub fn write_lift<T: Real, W: Write>(lift: &LiftedCurve<T>, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header = vec!["t".to_string(), "branch".to_string()];
    if lift.branch_dim == 1 {
        header.extend(["re".to_string(), "im".to_string()]);
    } else {
        for c in 1..=lift.branch_dim {
            header.push(format!("re_{c}"));
            header.push(format!("im_{c}"));
        }
    }
    wtr.write_record(&header).map_err(csv_err)?;
    for i in 0..lift.len() {
        for b in 0..lift.branches {
            let mut row = vec![lift.nodes()[i].to_string(), b.to_string()];
            for z in lift.branch_value(i, b) {
                row.push(z.re.to_string());
                row.push(z.im.to_string());
            }
            wtr.write_record(&row).map_err(csv_err)?;
        }
    }
    wtr.flush().map_err(csv_err)
}

pub fn read_tuples<T: Real, R: Read>(r: R) -> Result<Vec<AQPoint<T>>> {
    let mut rdr = reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    expect_leading(&headers, &["id", "point"])?;
    let (n, _) = complex_columns(&headers, 2, None)?;
    let mut tuples = Vec::new();
    let mut current: Option<(String, Vec<Vec<C<T>>>)> = None;
    for (row, rec) in records(&mut rdr)?.iter().enumerate() {
        let id = rec.get(0).unwrap_or("").to_string();
        let point = complex_fields(rec, &headers, 2, n, row + 1)?;
        match &mut current {
            Some((cid, pts)) if *cid == id => pts.push(point),
            _ => {
                if let Some((_, pts)) = current.take() {
                    tuples.push(AQPoint::new(pts)?);
                }
                current = Some((id, vec![point]));
            }
        }
    }
    if let Some((_, pts)) = current {
        tuples.push(AQPoint::new(pts)?);
    }
    Ok(tuples)
}

pub fn write_tuples<T: Real, W: Write>(tuples: &[AQPoint<T>], w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let n = tuples.first().map_or(1, |t| t.dim());
    let mut header = vec!["id".to_string(), "point".to_string()];
    for k in 1..=n {
        header.push(format!("re_{k}"));
        header.push(format!("im_{k}"));
    }
    wtr.write_record(&header).map_err(csv_err)?;
    for (id, tup) in tuples.iter().enumerate() {
        for (p, pt) in tup.points().iter().enumerate() {
            let mut row = vec![id.to_string(), p.to_string()];
            for z in pt {
                row.push(z.re.to_string());
                row.push(z.im.to_string());
            }
            wtr.write_record(&row).map_err(csv_err)?;
        }
    }
    wtr.flush().map_err(csv_err)
}

/// `(x, y, values, active)` of one grid row.
type GridRow<T> = (T, T, Vec<C<T>>, bool);

pub fn read_grid2d<T: Real, R: Read>(r: R) -> Result<SampledGrid2D<T>> {
    let mut rdr = reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    expect_leading(&headers, &["x", "y"])?;
    let (n, has_active) = complex_columns(&headers, 2, Some("active"))?;
    let mut rows: Vec<GridRow<T>> = Vec::new();
    for (row, rec) in records(&mut rdr)?.iter().enumerate() {
        let active = if has_active {
            match rec.get(2 + 2 * n).unwrap_or("").trim() {
                "1" | "true" => true,
                "0" | "false" => false,
                other => {
                    return Err(Error::Csv(format!(
                        "row {}, column `active`: `{other}` is not 0 or 1",
                        row + 1
                    )))
                }
            }
        } else {
            true
        };
        rows.push((
            field(rec, &headers, 0, row + 1)?,
            field(rec, &headers, 1, row + 1)?,
            complex_fields(rec, &headers, 2, n, row + 1)?,
            active,
        ));
    }
    let axis = |pick: fn(&GridRow<T>) -> T| -> Vec<T> {
        let mut v: Vec<T> = rows.iter().map(pick).collect();
        v.sort_by(|a, b| a.cmp_total(b));
        v.dedup();
        v
    };
    let xs = axis(|r| r.0);
    let ys = axis(|r| r.1);
    let (nx, ny) = (xs.len(), ys.len());
    let key = |t: T| t.as_f64().to_bits();
    let xi: BTreeMap<u64, usize> = xs.iter().enumerate().map(|(i, &x)| (key(x), i)).collect();
    let yi: BTreeMap<u64, usize> = ys.iter().enumerate().map(|(i, &y)| (key(y), i)).collect();
    let mut values = vec![vec![C::new(T::zero(), T::zero()); n]; nx * ny];
    let mut mask = vec![false; nx * ny];
    for (x, y, v, active) in rows {
        let k = xi[&key(x)] * ny + yi[&key(y)];
        values[k] = v;
        mask[k] = active;
    }
    let grid = SampledGrid2D::new(Grid::new(xs)?, Grid::new(ys)?, values)?;
    if mask.iter().all(|&m| m) {
        Ok(grid)
    } else {
        grid.with_mask_vec(mask)
    }
}

pub fn write_grid_lift<T: Real, W: Write>(lift: &LiftedGrid2D<T>, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["x", "y", "branch", "re", "im"]).map_err(csv_err)?;
    for (ix, x) in lift.x.nodes().iter().enumerate() {
        for (iy, y) in lift.y.nodes().iter().enumerate() {
            if let Some(v) = lift.value(ix, iy) {
                for (b, z) in v.iter().enumerate() {
                    wtr.write_record([
                        x.to_string(),
                        y.to_string(),
                        b.to_string(),
                        z.re.to_string(),
                        z.im.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
    }
    wtr.flush().map_err(csv_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_round_trip() {
        let c = SampledCurve::from_fn(Grid::uniform(0.0, 1.0, 7).unwrap(), |t: f64| {
            vec![C::new(t, -t), C::new(t.sin(), 0.1)]
        })
        .unwrap();
        let mut buf = Vec::new();
        write_curve(&c, &mut buf).unwrap();
        let back: SampledCurve<f64> = read_curve(buf.as_slice()).unwrap();
        assert_eq!(back.values(), c.values());
        assert_eq!(back.nodes(), c.nodes());
    }

    #[test]
    fn bad_header_names_the_column() {
        let err = read_curve::<f64, _>("t,re_1,imag_1\n0,1,2\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("`imag_1`"), "{err}");
        let err = read_curve::<f64, _>("time,re_1,im_1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("`time`"), "{err}");
        let err = read_curve::<f64, _>("t,re_1,im_1\n0,x,2\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("`re_1`"), "{err}");
    }

    #[test]
    fn tuples_group_by_id() {
        let csv = "id,point,re_1,im_1\na,0,1,0\na,1,2,0\nb,0,3,0\nb,1,4,0\n";
        let t: Vec<AQPoint<f64>> = read_tuples(csv.as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].q(), 2);
        let mut buf = Vec::new();
        write_tuples(&t, &mut buf).unwrap();
        let back: Vec<AQPoint<f64>> = read_tuples(buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn grid_with_missing_rows_is_masked() {
        let csv = "x,y,re_1,im_1\n0,0,1,0\n0,1,2,0\n1,0,3,0\n";
        let g: SampledGrid2D<f64> = read_grid2d(csv.as_bytes()).unwrap();
        assert_eq!((g.nx(), g.ny()), (2, 2));
        assert!(g.active(0, 1) && !g.active(1, 1));
        assert_eq!(g.value(1, 0)[0], C::new(3.0, 0.0));
    }
}
