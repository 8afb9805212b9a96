use sparsketch_bench::report::aux_columns;
use sparsketch_bench::{emit_report, run_experiment, ExperimentConfig, ExperimentId, ExperimentReport, Format};

fn report(id: ExperimentId) -> ExperimentReport {
    let mut cfg = ExperimentConfig::new(id);
    cfg.trials = 4;
    cfg.n = 100;
    cfg.d = 6;
    cfg.k = 2;
    cfg.probes = 12;
    cfg.samples = 5_000;
    if id == ExperimentId::Recover {
        cfg.n = 300;
        cfg.d = 300;
    }
    if id == ExperimentId::SupportSweep {
        cfg.m_grid = vec![5, 50];
    }
    run_experiment(&cfg).unwrap()
}

#[test]
fn json_reread_equals_in_memory_report() {
    let dir = tempfile::tempdir().unwrap();
    for id in ExperimentId::ALL {
        let r = report(id);
        let path = emit_report(&r, Format::Json, dir.path()).unwrap();
        let back = ExperimentReport::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(back, r, "{id}");
    }
}

#[test]
fn csv_column_count_is_fixed_per_experiment() {
    let dir = tempfile::tempdir().unwrap();
    for id in ExperimentId::ALL {
        let r = report(id);
        let path = emit_report(&r, Format::Csv, dir.path()).unwrap();
        let mut reader = csv::Reader::from_path(path).unwrap();
        let width = 5 + aux_columns(id).len();
        assert_eq!(reader.headers().unwrap().len(), width, "{id}");
        let rows: Vec<_> = reader.records().map(|row| row.unwrap()).collect();
        assert_eq!(rows.len(), r.records.len());
        for (row, rec) in rows.iter().zip(&r.records) {
            assert_eq!(row.len(), width);
            assert_eq!(row[2].parse::<f64>().unwrap(), rec.value, "floats round-trip");
        }
    }
}

#[test]
fn svg_is_well_formed_with_one_bar_per_bin() {
    let dir = tempfile::tempdir().unwrap();
    for id in [ExperimentId::EmbedL2, ExperimentId::SamplingFail, ExperimentId::CalibrateStable] {
        let path = emit_report(&report(id), Format::Svg, dir.path()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let doc = roxmltree::Document::parse(&text).unwrap();
        let root = doc.root_element();
        assert_eq!(root.tag_name().name(), "svg");
        assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
        let bars = root.children().filter(|n| n.has_tag_name("rect")).count();
        assert_eq!(bars, 20);
    }
}

#[test]
fn files_are_named_after_the_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let r = report(ExperimentId::SketchedMin);
    let path = emit_report(&r, Format::Csv, dir.path()).unwrap();
    assert_eq!(path, dir.path().join("sketched-min.csv"));
}
