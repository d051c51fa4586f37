use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use lightcone::correspondence::doubled_polygon;
use lightcone::hull::parse_obj_vertices;
use lightcone::io::{read_surface_file, write_surface_file, Surface};
use lightcone::surface::builders::{grid_torus, one_vertex_torus};
use lightcone::{ConeMetric, Curvature, DecoratedMetric};

fn lightcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lightcone"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(TempDir::new().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }

    fn put(&self, name: &str, s: Surface) -> String {
        write_surface_file(&self.path(name), &s).unwrap();
        self.arg(name)
    }
}

fn uniform_torus() -> Surface {
    Surface::Decorated(DecoratedMetric::new(one_vertex_torus(), vec![1.0; 3]).unwrap())
}

fn flat_torus(w: f64, h: f64) -> Surface {
    Surface::Cone(ConeMetric::new(one_vertex_torus(), Curvature::Euclidean, vec![w, h, w.hypot(h)]).unwrap())
}

fn read(p: &Path) -> Surface {
    read_surface_file(p).unwrap()
}

#[test]
fn gauss_bonnet_on_flat_torus() {
    let d = Dir::new();
    let f = d.put("t.json", flat_torus(1.0, 1.0));
    let o = lightcone(&["check", "gauss-bonnet", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gauss-bonnet residual"));
}

#[test]
fn spherical_conversion_outside_domain() {
    let d = Dir::new();
    let f = d.put("t.json", uniform_torus());
    let o = lightcone(&["convert", "--to", "cone", "-K", "1", &f, &d.arg("out.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotInTStar"));
    assert!(!d.path("out.json").exists());
    let o = lightcone(&["check", "tstar", &f]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn conversions_round_trip() {
    let d = Dir::new();
    let f = d.put("t.json", uniform_torus());
    for k in ["-1", "0"] {
        let cone = d.arg(&format!("c{k}.json"));
        let back = d.arg(&format!("d{k}.json"));
        assert!(lightcone(&["convert", "--to", "cone", "-K", k, &f, &cone])
            .status
            .success());
        let Surface::Cone(m) = read(Path::new(&cone)) else {
            panic!()
        };
        assert_eq!(m.k.sign().to_string(), k);
        assert!(lightcone(&["convert", "--to", "decorated", &cone, &back])
            .status
            .success());
        let Surface::Decorated(b) = read(Path::new(&back)) else {
            panic!()
        };
        for l in b.lambda {
            assert!((l - 1.0).abs() < 1e-12);
        }
    }
    let cone = d.arg("c-1.json");
    let o = lightcone(&["convert", "--to", "decorated", "-K", "0", &cone, &d.arg("x.json")]);
    assert_eq!(o.status.code(), Some(2));
    let o = lightcone(&["convert", "--to", "cone", &f, &d.arg("x.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hull_writes_a_mesh() {
    let d = Dir::new();
    let f = d.put("t.json", uniform_torus());
    let obj = d.arg("h.obj");
    let o = lightcone(&["hull", "--depth", "6", &f, &obj]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("quotient faces: 2"), "{out}");
    assert!(out.contains("matches flip decomposition: true"));
    let text = std::fs::read_to_string(&obj).unwrap();
    let verts = parse_obj_vertices(&text).unwrap();
    assert!(!verts.is_empty());
    for line in text.lines().filter(|l| l.starts_with("f ")) {
        for idx in line.split_whitespace().skip(1) {
            let i: usize = idx.parse().unwrap();
            assert!((1..=verts.len()).contains(&i));
        }
    }
    let cyl = d.arg("c.obj");
    assert!(lightcone(&["hull", "--depth", "4", "--chart", "cylinder", &f, &cyl])
        .status
        .success());
    assert!(parse_obj_vertices(&std::fs::read_to_string(&cyl).unwrap()).is_ok());
    let o = lightcone(&["hull", "--depth", "2", &f, &obj]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_input_and_usage() {
    let d = Dir::new();
    std::fs::write(d.path("bad.json"), "{\"version\": 1}").unwrap();
    let o = lightcone(&["check", "gauss-bonnet", &d.arg("bad.json")]);
    assert_eq!(o.status.code(), Some(64));
    let o = lightcone(&["check", "gauss-bonnet", &d.arg("missing.json")]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(lightcone(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(lightcone(&["convert", "--to", "cone"]).status.code(), Some(64));
    assert_eq!(lightcone(&["--help"]).status.code(), Some(0));
}

#[test]
fn scale_and_delaunay() {
    let d = Dir::new();
    let f = d.put(
        "g.json",
        Surface::Decorated(DecoratedMetric::new(grid_torus(2, 1).unwrap(), vec![1.0; 6]).unwrap()),
    );
    let scaled = d.arg("s.json");
    assert!(lightcone(&["scale", "-u", "1.5,-0.5", &f, &scaled]).status.success());
    let Surface::Decorated(s) = read(Path::new(&scaled)) else {
        panic!()
    };
    let mut seen: Vec<f64> = s.lambda.clone();
    seen.sort_by(f64::total_cmp);
    seen.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    // Edges join vertices (0,0), (0,1) or (1,1).
    for l in &seen {
        assert!(
            [(-0.5f64).exp(), 0.5f64.exp(), 1.5f64.exp()]
                .iter()
                .any(|x| (x - l).abs() < 1e-12),
            "{l}"
        );
    }
    assert_eq!(lightcone(&["scale", "-u", "1", &f, &scaled]).status.code(), Some(2));

    let out = d.arg("dl.json");
    let log = d.arg("flips.txt");
    let o = lightcone(&["delaunay", &scaled, &out, "--log", &log]);
    assert!(o.status.success());
    let text = stdout(&o);
    let flips: usize = text
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("flips: ")
        .parse()
        .unwrap();
    assert!(flips > 0);
    assert_eq!(std::fs::read_to_string(&log).unwrap().lines().count(), flips);
    assert!(text.contains("strict edges:") && text.contains("decomposition faces:"));
    let o2 = lightcone(&["delaunay", &out, &d.arg("again.json")]);
    assert!(stdout(&o2).starts_with("flips: 0\n"));
}

#[test]
fn uniformize_reports_iterations() {
    let d = Dir::new();
    let m = doubled_polygon(Curvature::Euclidean, &[3.0, 4.0, 5.0]).unwrap();
    let f = d.put("t.json", Surface::Cone(m));
    let out = d.arg("u.json");
    let k = (4.0 * std::f64::consts::PI / 3.0).to_string();
    let kappa = [k.as_str(); 3].join(",");
    let o = lightcone(&["uniformize", "--kappa", &kappa, "-K", "0", &f, &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("iteration 0: residual"));
    assert!(text.lines().count() > 2);
    assert!(text.lines().last().unwrap().starts_with("u = "));
    let Surface::Cone(r) = read(Path::new(&out)) else {
        panic!()
    };
    for l in &r.lengths {
        assert!((l - r.lengths[0]).abs() < 1e-8 * l);
    }
    let o = lightcone(&["check", "gauss-bonnet", &out]);
    assert_eq!(o.status.code(), Some(0));
    let o = lightcone(&["uniformize", "--kappa", "1,1,1", "-K", "0", &f, &out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conformal_equivalence_check() {
    let d = Dir::new();
    let sq = d.put("sq.json", flat_torus(1.0, 1.0));
    let rect = d.put("rect.json", flat_torus(1.0, 2.0));
    let big = d.put("big.json", flat_torus(3.0, 3.0));
    assert_eq!(lightcone(&["check", "equivalent", &sq, &rect]).status.code(), Some(1));
    assert_eq!(lightcone(&["check", "equivalent", &sq, &big]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let d = Dir::new();
    let f = d.put(
        "g.json",
        Surface::Decorated(
            DecoratedMetric::new(
                grid_torus(3, 2).unwrap(),
                (0..18).map(|i| 1.0 + 0.1 * (i % 5) as f64).collect(),
            )
            .unwrap(),
        ),
    );
    let run = |name: &str| {
        let p = d.arg(name);
        assert!(lightcone(&["delaunay", &f, &p]).status.success());
        std::fs::read(&p).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}
