//! Report serialization: JSON with full-precision floats and CSV grid dumps.
//!
//! Every f64 is printed with 17 significant digits so values round-trip
//! exactly; identical inputs produce byte-identical reports.

use serde::Serialize;
use std::io;

use crate::geom::{Grid, GridSpec, Region};

/// Compact-JSON formatter that prints every float as `{:.16e}`.
struct SciFloat;

impl serde_json::ser::Formatter for SciFloat {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize to JSON with 17-significant-digit floats.
pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFloat);
    value
        .serialize(&mut ser)
        .expect("report types serialize without error");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// CSV dump of one metric over a grid, header `x,y,metric`, full precision.
pub fn grid_csv(region: Region, grid: GridSpec, metric: &[f64]) -> String {
    let g = Grid::new(region, grid);
    assert_eq!(metric.len(), g.len(), "metric length must match the grid");
    let mut out = String::with_capacity(metric.len() * 64 + 16);
    out.push_str("x,y,metric\n");
    for (k, v) in metric.iter().enumerate() {
        let p = g.point(k);
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p.x, p.y, v));
    }
    out
}

/// CSV dump of solver iterates, header `iter,x,y,residual`.
pub fn trace_csv(iterates: &[(usize, crate::geom::Vec2, f64)]) -> String {
    let mut out = String::from("iter,x,y,residual\n");
    for (k, z, r) in iterates {
        out.push_str(&format!("{k},{:.16e},{:.16e},{r:.16e}\n", z.x, z.y));
    }
    out
}
