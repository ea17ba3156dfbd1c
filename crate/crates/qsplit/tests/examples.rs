use std::path::{Path, PathBuf};

use qsplit::format::*;
use qsplit_core::reference::{blowup_connection, cp1_connection, non_existence_connection, non_existence_e0, non_uniqueness_connection, non_uniqueness_e0};
use qsplit_core::ring::{blowup_slice_ring, cp1_ring, point_ring};

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(examples().join(name)).unwrap()
}

#[test]
fn every_example_round_trips() {
    let mut seen = 0;
    for entry in std::fs::read_dir(examples()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        match path.extension().and_then(|e| e.to_str()).unwrap() {
            "conn" => {
                let a = parse_connection(&text).unwrap();
                assert_eq!(parse_connection(&write_connection(&a)).unwrap(), a, "{}", path.display());
            }
            "mat" => {
                let a = parse_matrix(&text).unwrap();
                assert_eq!(parse_matrix(&write_matrix(&a)).unwrap(), a);
            }
            "series" => {
                let a = parse_series(&text).unwrap();
                assert_eq!(parse_series(&write_series(&a)).unwrap(), a);
            }
            "ring" => {
                let a = parse_ring(&text).unwrap();
                assert_eq!(parse_ring(&write_ring(&a)).unwrap(), a, "{}", path.display());
            }
            "complex" => {
                let a = parse_complex(&text).unwrap();
                assert_eq!(parse_complex(&write_complex(&a)).unwrap(), a);
            }
            other => panic!("unexpected example type {other}"),
        }
        seen += 1;
    }
    assert!(seen >= 13);
}

#[test]
fn connections_match_the_bundled_data() {
    let cases = [
        ("cp1.conn", cp1_connection()),
        ("blowup.conn", blowup_connection()),
        ("non_existence.conn", non_existence_connection()),
        ("non_uniqueness.conn", non_uniqueness_connection()),
    ];
    for (name, expected) in cases {
        let c = parse_connection(&read(name)).unwrap().connection;
        assert_eq!(c.with_order(4), expected.with_order(4), "{name}");
    }
    assert_eq!(parse_matrix(&read("diag10.mat")).unwrap(), non_existence_e0());
    assert_eq!(parse_matrix(&read("diag1100.mat")).unwrap(), non_uniqueness_e0());
}

#[test]
fn rings_match_the_bundled_data() {
    assert_eq!(parse_ring(&read("cp1.ring")).unwrap(), cp1_ring());
    assert_eq!(parse_ring(&read("point.ring")).unwrap(), point_ring());
    assert_eq!(parse_ring(&read("blowup.ring")).unwrap(), blowup_slice_ring());
}

#[test]
fn ring_slice_reproduces_the_raw_connections() {
    let ring = qsplit_core::ring::validate_ring(parse_ring(&read("cp1.ring")).unwrap()).unwrap();
    let conn = parse_connection(&read("cp1.conn")).unwrap().connection;
    assert_eq!(ring.build_connection(0).unwrap().connection.with_order(3), conn.with_order(3));
}
