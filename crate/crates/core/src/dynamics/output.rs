use std::io::{self, Write};

use super::{CharTrace, Diagnostics};
use crate::kernel::io::fmt_f64;

pub fn write_diagnostics_csv<W: Write>(rows: &[Diagnostics], mut w: W) -> io::Result<()> {
    writeln!(w, "t,energy,min_ux,argmin_x,max_abs_u")?;
    for d in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(d.t),
            fmt_f64(d.energy),
            fmt_f64(d.min_ux),
            fmt_f64(d.argmin_x),
            fmt_f64(d.max_abs_u)
        )?;
    }
    Ok(())
}

/// One row per sample; `x0` identifies the trace.
pub fn write_traces_csv<W: Write>(traces: &[CharTrace], mut w: W) -> io::Result<()> {
    writeln!(w, "x0,t,q,A,B,h")?;
    for tr in traces {
        for s in &tr.samples {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_f64(tr.x0),
                fmt_f64(s.t),
                fmt_f64(s.q),
                fmt_f64(s.a),
                fmt_f64(s.b),
                fmt_f64(s.h)
            )?;
        }
    }
    Ok(())
}
