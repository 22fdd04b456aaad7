use galorb_web::{psl2_report, rank_table, screen_report};
use serde_json::Value;

#[test]
fn rank_table_rows() {
    let v: Value = serde_json::from_str(&rank_table(5, 30).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 26);
    assert_eq!(rows[0]["rank"], 1);
    assert_eq!(rows[2]["rank"], 0);
    assert!(rows[20]["bound"].is_null());
    assert_eq!(rows[21]["n"], 26);
    assert!(rows[21]["bound"].is_string());
    assert!(rank_table(0, 3).is_err());
    assert!(rank_table(9, 5).is_err());
    assert!(rank_table(1, 1000).is_err());
}

#[test]
fn psl2_values() {
    let v: Value = serde_json::from_str(&psl2_report(11).unwrap()).unwrap();
    assert_eq!(v["order"], "660");
    assert_eq!((v["rank"].as_u64(), v["f"].as_u64()), (Some(1), Some(2)));
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
    let v: Value = serde_json::from_str(&psl2_report(23).unwrap()).unwrap();
    assert!(v["f"].as_u64().unwrap() > 4);
    assert!(psl2_report(6).is_err());
    assert!(psl2_report(128).is_err());
}

#[test]
fn screen_values() {
    let v: Value = serde_json::from_str(&screen_report("PSU_div4", 40, 64).unwrap()).unwrap();
    let ex: Vec<(u64, u64)> = serde_json::from_value(v["exceptions"].clone()).unwrap();
    assert_eq!(ex, [(8, 2), (8, 3), (12, 2)]);
    assert_eq!(v["certificate"]["certified"], true);
    assert!(screen_report("E8", 10, 10).is_err());
    assert!(screen_report("PSL", 100, 10).is_err());
}
