mod common;

use std::path::Path;
use std::process::{Command, Output};

fn devocr(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_devocr"));
    for a in args {
        cmd.arg(a);
    }
    cmd.env("RUST_LOG", "warn").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn train(dump: &Path, kind: &str, out: &Path) -> Output {
    devocr(&[&"train", &"--features", &dump, &"--classifier", &kind, &"--epochs", &"60", &"--seed", &"2", &"--out", &out])
}

#[test]
fn extract_train_cv_predict() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    common::write_corpus(&data, 3, 6, 21);

    let dump = dir.path().join("features.csv");
    let out = devocr(&[&"extract", &"--data", &data, &"--out", &dump]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&dump).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# classes=g00,g01,g02"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3 * 18);
    for (i, kind) in ["chaincode200", "intersection32", "shadow16"].iter().enumerate() {
        assert_eq!(rows[i].split(',').nth(1), Some(*kind));
    }

    let mut models = Vec::new();
    for kind in ["shadow", "intersection", "chaincode"] {
        let model = dir.path().join(format!("{kind}.model"));
        let out = train(&dump, kind, &model);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let net = devocr::mlp::load(&model).unwrap();
        assert_eq!(net.sizes().outputs, 3);
        models.push(model);
    }

    let config = dir.path().join("cv.conf");
    std::fs::write(&config, "epochs=60\nseed=4\n").unwrap();
    let report = dir.path().join("report.txt");
    let out = devocr(&[&"cv", &"--data", &data, &"--config", &config, &"--report", &report]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary = devocr::pipeline::ReportSummary::parse(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(summary.classes, ["g00", "g01", "g02"]);

    let image = data.join("g01").join("000.pgm");
    let out = devocr(&[
        &"predict", &"--models", &models[0], &models[1], &models[2], &"--weights-from", &report, &"--image", &image, &"--top", &"2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let ranked: Vec<Vec<&str>> = stdout.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(ranked.len(), 2);
    assert_eq!((ranked[0][0], ranked[1][0]), ("1", "2"));
    assert!(summary.classes.iter().any(|c| c == ranked[0][1]));
    assert_ne!(ranked[0][1], ranked[1][1]);

    let out = devocr(&[&"predict", &"--models", &models[0], &models[0], &models[2], &"--weights-from", &report, &"--image", &image]);
    assert_eq!(code(&out), 1);

    // Labels beyond the requested output count fail inside training.
    let out = devocr(&[&"train", &"--features", &dump, &"--classifier", &"shadow", &"--classes", &"2", &"--out", &dir.path().join("x")]);
    assert_eq!(code(&out), 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&devocr(&[&"frobnicate"])), 1);
    assert_eq!(code(&devocr(&[&"extract", &"--data"])), 1);
    assert_eq!(code(&devocr(&[&"--help"])), 0);
    let missing = dir.path().join("nope");
    assert_eq!(code(&devocr(&[&"extract", &"--data", &missing, &"--out", &dir.path().join("f")])), 2);

    let dump = dir.path().join("f.csv");
    std::fs::write(&dump, "0,shadow16,1,2\n").unwrap();
    assert_eq!(code(&train(&dump, "shadow", &dir.path().join("m"))), 2);
    assert_eq!(code(&train(&dump, "zernike", &dir.path().join("m"))), 1);

    let data = dir.path().join("data");
    common::write_corpus(&data, 2, 3, 1);
    let config = dir.path().join("bad.conf");
    std::fs::write(&config, "momentum=3\n").unwrap();
    let out = devocr(&[&"cv", &"--data", &data, &"--config", &config, &"--report", &dir.path().join("r")]);
    assert_eq!(code(&out), 1);

    let model = dir.path().join("broken.model");
    std::fs::write(&model, "devocr-mlp 1\nsizes 16\n").unwrap();
    let report = dir.path().join("r.txt");
    std::fs::write(&report, format!("{}\nclass_names=a,b\naggregate.weights=0.3,0.3,0.4\n", devocr::pipeline::REPORT_HEADER)).unwrap();
    let out = devocr(&[
        &"predict", &"--models", &model, &model, &model, &"--weights-from", &report, &"--image", &data.join("g00").join("000.pgm"),
    ]);
    assert_eq!(code(&out), 2);
}
