use tempered::io::MatrixFile;
use tempered::linalg::{BipartiteShape, ComplexMatrix, C64};
use tempered::states::{omega3, phi, x3};
use tempered::Error;

fn temp_path(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tempered-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn round_trip_through_disk() {
    let w = omega3();
    let path = temp_path("omega3.json");
    MatrixFile::from_operator(&w).write(&path).unwrap();
    let back = MatrixFile::read(&path).unwrap().to_state("omega3").unwrap();
    assert_eq!(back.matrix, w.matrix);
    assert_eq!(back.shape, w.shape);
}

#[test]
fn complex_entries_round_trip_exactly() {
    let shape = BipartiteShape::new(1, 2).unwrap();
    let m = ComplexMatrix::from_entries(
        2,
        vec![C64::new(0.3, 0.0), C64::new(0.1, -1.0 / 3.0), C64::new(0.1, 1.0 / 3.0), C64::new(0.7, 0.0)],
    )
    .unwrap();
    let text = MatrixFile::new(&m, shape).unwrap().to_json();
    let (back, s) = MatrixFile::from_json(&text).unwrap().to_matrix().unwrap();
    assert_eq!(back, m);
    assert_eq!(s, shape);
}

#[test]
fn json_layout() {
    let text = MatrixFile::from_operator(&phi(2).unwrap()).to_json();
    assert!(text.starts_with(r#"{"dims":[2,2],"matrix":[[0.5,0.0],[0.0,0.0]"#), "{text}");
}

#[test]
fn wrong_entry_count() {
    let err = MatrixFile::from_json(r#"{"dims":[2,2],"matrix":[[1,0],[0,0]]}"#).unwrap().to_matrix().unwrap_err();
    assert!(matches!(err, Error::Parse(ref m) if m.contains("16")), "{err}");
}

#[test]
fn unknown_and_missing_fields() {
    assert!(matches!(MatrixFile::from_json(r#"{"dims":[1,1],"matrix":[[1,0]],"label":"x"}"#), Err(Error::Parse(_))));
    assert!(matches!(MatrixFile::from_json(r#"{"dims":[1,1]}"#), Err(Error::Parse(_))));
    assert!(matches!(MatrixFile::from_json("not json"), Err(Error::Parse(_))));
    assert!(matches!(MatrixFile::from_json(r#"{"dims":[0,1],"matrix":[]}"#).unwrap().to_matrix(), Err(Error::Parse(_))));
}

#[test]
fn non_hermitian_input() {
    let text = r#"{"dims":[1,2],"matrix":[[0.5,0],[0.1,0],[0,0],[0.5,0]]}"#;
    let err = MatrixFile::from_json(text).unwrap().to_state("skew").unwrap_err();
    assert!(matches!(err, Error::Contract(ref m) if m.contains("Hermitian")), "{err}");
    // Asymmetry below the file tolerance is symmetrised away.
    let text = r#"{"dims":[1,2],"matrix":[[0.5,0],[1e-12,0],[0,0],[0.5,0]]}"#;
    let op = MatrixFile::from_json(text).unwrap().to_state("near").unwrap();
    assert!(op.matrix.is_hermitian(0.0));
}

#[test]
fn non_state_input() {
    let file = MatrixFile::from_operator(&x3());
    assert!(file.to_hermitian("x3").is_ok());
    assert!(matches!(file.to_state("x3"), Err(Error::Contract(_))));
    let text = r#"{"dims":[1,1],"matrix":[[2,0]]}"#;
    assert!(matches!(MatrixFile::from_json(text).unwrap().to_state("two"), Err(Error::Contract(_))));
}

#[test]
fn unreadable_file() {
    assert!(MatrixFile::read(temp_path("does-not-exist.json")).is_err());
}
