//! Built-in datasets.

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const FIXTURES: &[&str] = &["rumor-weibo"];

/// Cumulative retweet counts of a Weibo rumor, sampled every 10 minutes
/// from 14:10 to 02:00 the following day.
const RUMOR_WEIBO: [f64; 72] = [
    78.0, 175.0, 257.0, 334.0, 392.0, 463.0, 529.0, 582.0, 628.0, 667.0, //
    701.0, 724.0, 749.0, 788.0, 822.0, 868.0, 899.0, 933.0, 965.0, 1000.0, //
    1021.0, 1048.0, 1072.0, 1088.0, 1112.0, 1123.0, 1132.0, 1147.0, 1158.0, 1170.0, //
    1186.0, 1197.0, 1210.0, 1222.0, 1235.0, 1243.0, 1252.0, 1259.0, 1267.0, 1279.0, //
    1285.0, 1291.0, 1295.0, 1299.0, 1307.0, 1314.0, 1321.0, 1331.0, 1334.0, 1336.0, //
    1339.0, 1346.0, 1351.0, 1354.0, 1356.0, 1357.0, 1359.0, 1360.0, 1363.0, 1368.0, //
    1371.0, 1371.0, 1372.0, 1374.0, 1376.0, 1378.0, 1379.0, 1380.0, 1380.0, 1380.0, //
    1386.0, 1387.0,
];

pub fn builtin_fixture(name: &str) -> Result<TimeSeries> {
    match name {
        "rumor-weibo" => Ok(rumor_weibo()),
        _ => Err(Error::UnknownFixture {
            name: name.to_string(),
            available: FIXTURES.join(", "),
        }),
    }
}

pub fn rumor_weibo() -> TimeSeries {
    let start = 14 * 60 + 10;
    let labels = (0..RUMOR_WEIBO.len())
        .map(|i| {
            let minutes = (start + 10 * i) % (24 * 60);
            format!("{:02}:{:02}", minutes / 60, minutes % 60)
        })
        .collect();
    TimeSeries::with_labels(RUMOR_WEIBO.to_vec(), labels).expect("fixture is well-formed")
}
