use serde_json::Value;
use thinset_web::{color_square_json, greedy_partition_json, mu_json};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn square_is_fully_colored() {
    let v = parse(color_square_json(3).unwrap());
    assert_eq!(v["side"], 8);
    let colors = v["colors"].as_array().unwrap();
    assert_eq!(colors.len(), 64);
    assert!(colors.iter().all(|c| (1..=3).contains(&c.as_u64().unwrap())));
    assert_eq!(v["containments"], true);
    assert!(color_square_json(7).is_err());
}

#[test]
fn greedy_parts_cover_the_input() {
    let v = parse(greedy_partition_json("1, 2, 10, 11, 100, 101", 2, 1001).unwrap());
    let mut all: Vec<i64> = v["parts"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|p| p.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()))
        .collect();
    all.sort();
    assert_eq!(all, [1, 2, 10, 11, 100, 101]);
    assert!(v["verified"].as_array().unwrap().iter().all(|b| b == true));
    assert!(greedy_partition_json("1, two", 2, 101).is_err());
}

#[test]
fn mu_matches_the_cli() {
    let v = parse(mu_json("aleph omega", "aleph 3").unwrap());
    assert_eq!(v["text"], "aleph omega");
    let v = parse(mu_json("aleph 5", "aleph 0").unwrap());
    assert_eq!(v["text"], "aleph 4");
    assert!(mu_json("aleph omega^2", "aleph 0").is_err());
}
