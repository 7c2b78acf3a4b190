// SPDX-License-Identifier: Apache-2.0
//! Report streams. Every format carries the manifest: a leading comment for
//! text formats, a field for JSON.

use cama_core::ReportRecord;
use serde::Serialize;

use crate::manifest::RunManifest;
use crate::Format;

#[derive(Serialize)]
struct ReportDoc<'a> {
    manifest: &'a RunManifest,
    count: usize,
    reports: &'a [ReportRecord],
}

pub fn render_reports(format: Format, manifest: &RunManifest, reports: &[ReportRecord]) -> String {
    match format {
        Format::Json => crate::artifact::to_json(&ReportDoc {
            manifest,
            count: reports.len(),
            reports,
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["cycle", "state", "partition", "symbol"])
                .expect("in-memory write");
            for r in reports {
                w.serialize((r.cycle, r.state, r.partition, r.symbol))
                    .expect("in-memory write");
            }
            let body = String::from_utf8(w.into_inner().expect("flush")).expect("ascii");
            format!("# manifest: {}\n{body}", manifest.to_line())
        }
        Format::Table => {
            let mut s = format!("# manifest: {}\n", manifest.to_line());
            for r in reports {
                s.push_str(&format!(
                    "cycle {} state {} partition {} symbol 0x{:02x}\n",
                    r.cycle, r.state, r.partition, r.symbol
                ));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(cycle: u64) -> ReportRecord {
        ReportRecord {
            cycle,
            state: 3,
            partition: 0,
            symbol: b'd',
        }
    }

    #[test]
    fn formats_agree_on_content() {
        let m = RunManifest::default();
        let r = [rec(3), rec(4)];
        let table = render_reports(Format::Table, &m, &r);
        assert_eq!(table.lines().filter(|l| !l.starts_with('#')).count(), 2);
        assert!(table.contains("cycle 3 state 3 partition 0 symbol 0x64"));
        let csv = render_reports(Format::Csv, &m, &r);
        assert!(csv.contains("cycle,state,partition,symbol\n3,3,0,100\n4,3,0,100\n"));
        let v: serde_json::Value =
            serde_json::from_str(&render_reports(Format::Json, &m, &r)).unwrap();
        assert_eq!(v["count"], 2);
        assert_eq!(v["reports"][1]["cycle"], 4);
    }
}
