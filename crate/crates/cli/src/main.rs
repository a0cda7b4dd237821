use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use betatile::betamap::config::{digit_json, expansion_json, parse_qbeta_value, qbeta_json, transform_json, TransformConfig};
use betatile::betamap::{compute_v, invariant_density, BetaTransform, TransformError, VData};
use betatile::sofic::{self, SoficError, Soficity};
use betatile::tiling::{self, render, GifsGraph, TilingError, WCheck};
use betatile::{PisotField, QBeta};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "betatile", version, about = "Beta-transformations with Pisot unit base: expansions, tiles and tiling decisions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// transform config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// GIFS iteration depth; chosen from the error target when omitted
    #[arg(long)]
    depth: Option<usize>,
    /// bits of the certified enclosures of reported real values
    #[arg(long, default_value_t = 53)]
    precision: u32,
    /// JSON report path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG figure path, for commands that render
    #[arg(long)]
    svg: Option<PathBuf>,
    /// JSON list of sample points, each a coordinate list
    #[arg(long)]
    samples: Option<PathBuf>,
    /// search budget (orbit steps, candidates or states, depending on the command)
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// T-expansion of a point
    Expand {
        #[command(flatten)]
        c: Common,
        /// the point as a JSON coordinate list, e.g. [0,1] or ["1/2",0]
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// boundary orbit set V, partition J and GIFS edges
    Vset {
        #[command(flatten)]
        c: Common,
    },
    /// natural extension domain and its volume
    Natext {
        #[command(flatten)]
        c: Common,
    },
    /// tile clouds D_x and a patch of the tiling
    Tiles {
        #[command(flatten)]
        c: Common,
        /// conjugate radius of the rendered patch
        #[arg(long, default_value_t = 1.5)]
        radius: f64,
    },
    /// purely periodic points of Z[β] ∩ X
    Periodic {
        #[command(flatten)]
        c: Common,
    },
    /// finiteness property (F)
    CheckF {
        #[command(flatten)]
        c: Common,
    },
    /// weak finiteness property (W)
    CheckW {
        #[command(flatten)]
        c: Common,
    },
    /// tiles containing each sample and the covering degree candidate
    Degree {
        #[command(flatten)]
        c: Common,
    },
    /// soficity and the automaton of admissible words
    Sofic {
        #[command(flatten)]
        c: Common,
    },
    /// exact tiling decision by the difference transducer
    DecideTiling {
        #[command(flatten)]
        c: Common,
    },
    /// natural extension and its lattice translates
    Translates {
        #[command(flatten)]
        c: Common,
        /// the translates are by this multiple of Z^d
        #[arg(long, default_value_t = 1)]
        lattice_scale: i64,
        /// number of coverage samples in the fundamental domain
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        let code = if matches!(e, TransformError::BudgetExceeded(_)) { 3 } else { 2 };
        Failure { code, msg: e.to_string() }
    }
}

impl From<TilingError> for Failure {
    fn from(e: TilingError) -> Self {
        let code = match &e {
            TilingError::BudgetExceeded(_) => 3,
            TilingError::Transform(TransformError::BudgetExceeded(_)) => 3,
            TilingError::UnrenderableDimension(_) => 4,
            _ => 2,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<SoficError> for Failure {
    fn from(e: SoficError) -> Self {
        match e {
            SoficError::NotSofic(_) => Failure { code: 4, msg: e.to_string() },
            SoficError::BudgetExceeded(_) => Failure { code: 3, msg: e.to_string() },
            SoficError::Transform(t) => t.into(),
            SoficError::Tiling(t) => t.into(),
        }
    }
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{:02x}", b)).collect()
}

struct Ctx {
    t: BetaTransform,
    hash: String,
    c: Common,
}

impl Ctx {
    fn load(c: &Common) -> Result<Self, Failure> {
        let raw = fs::read(&c.config).map_err(|e| fail(2, format!("{}: {}", c.config.display(), e)))?;
        let text = String::from_utf8(raw.clone()).map_err(|_| fail(2, "config is not UTF-8"))?;
        let t = TransformConfig::from_json(&text)?.build()?;
        Ok(Ctx { t, hash: sha256_hex(&raw), c: c.clone() })
    }

    fn f(&self) -> &PisotField {
        self.t.field()
    }

    fn budget(&self, default: usize) -> usize {
        self.c.budget.unwrap_or(default)
    }

    fn vdata(&self) -> Result<VData, Failure> {
        Ok(compute_v(&self.t, self.budget(100_000))?)
    }

    fn graph(&self, vd: &VData) -> Result<GifsGraph, Failure> {
        Ok(GifsGraph::build(&self.t, vd)?)
    }

    /// Explicit depth, or the smallest with C·ρ^k ≤ 10⁻³ capped so that a
    /// cloud holds at most about 2·10⁵ points.
    fn depth(&self, g: &GifsGraph) -> usize {
        self.c.depth.unwrap_or_else(|| {
            let cap = (2e5f64.ln() / self.f().beta_f64().ln()).floor() as usize;
            g.depth_for(1e-3).min(cap)
        })
    }

    /// Certified real value of x at the requested precision.
    fn real(&self, x: &QBeta) -> Value {
        let b = self.f().gamma_prec(x, 1, self.c.precision);
        json!({ "approx": b.mid.re, "err": b.rad })
    }

    fn number(&self, x: &QBeta) -> Value {
        json!({ "coords": qbeta_json(x), "value": self.real(x) })
    }

    fn samples(&self) -> Result<Vec<QBeta>, Failure> {
        let f = self.f();
        match &self.c.samples {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| fail(2, format!("{}: {}", p.display(), e)))?;
                let v: Value = serde_json::from_str(&text).map_err(|e| fail(2, format!("samples: {}", e)))?;
                let arr = v.as_array().ok_or_else(|| fail(2, "samples must be a JSON list"))?;
                arr.iter().map(|s| parse_qbeta_value(f, s).map_err(Failure::from)).collect()
            }
            None => {
                // n + mβ with 0 ≤ n < 10, 0 ≤ m ≤ 5, excluding 0
                let mut out = Vec::new();
                for m in 0..=5 {
                    for n in 0..10 {
                        if n + m > 0 {
                            out.push(&f.int(n) + &f.mul(&f.int(m), &f.beta()));
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    fn report(&self, command: &str, depth: Option<usize>, result: Value) -> Value {
        json!({
            "command": command,
            "config_sha256": self.hash,
            "depth": depth,
            "transform": transform_json(&self.t),
            "result": result,
        })
    }

    fn write_svg(&self, svg: Result<String, TilingError>) -> Result<(), Failure> {
        if let Some(p) = &self.c.svg {
            write(p, &svg?)?;
        }
        Ok(())
    }
}

fn write(p: &Path, s: &str) -> Result<(), Failure> {
    fs::write(p, s).map_err(|e| fail(2, format!("{}: {}", p.display(), e)))
}

fn cloud_json(c: &tiling::TileCloud) -> Value {
    json!({
        "owner": qbeta_json(&c.owner),
        "depth": c.depth,
        "err": c.err,
        "points": c.points().map(|p| p.to_vec()).collect::<Vec<_>>(),
    })
}

fn periodic_json(ctx: &Ctx, p: &tiling::PeriodicSet) -> Value {
    let t = &ctx.t;
    json!({
        "P": p.points.iter().map(qbeta_json).collect::<Vec<_>>(),
        "values": p.points.iter().map(|x| ctx.real(x)).collect::<Vec<_>>(),
        "periods": p.periods,
        "words": p.words.iter().map(|w| w.iter().map(|&a| digit_json(&t.digits()[a])).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn words_json(t: &BetaTransform, ws: &[Vec<usize>]) -> Value {
    json!(ws.iter().map(|w| w.iter().map(|&a| digit_json(&t.digits()[a])).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn run(cli: Cli) -> Result<String, Failure> {
    let report = match cli.cmd {
        Cmd::Expand { c, x } => {
            let ctx = Ctx::load(&c)?;
            let v: Value = serde_json::from_str(&x).map_err(|e| fail(2, format!("--x: {}", e)))?;
            let xq = parse_qbeta_value(ctx.f(), &v)?;
            if !ctx.t.contains(&xq) {
                return Err(fail(2, format!("{} is outside the domain", xq)));
            }
            let e = ctx.t.expand(&xq, ctx.budget(100_000))?;
            let mut r = expansion_json(&ctx.t, &e);
            r["x"] = ctx.number(&xq);
            ctx.report("expand", None, r)
        }
        Cmd::Vset { c } => {
            let ctx = Ctx::load(&c)?;
            let vd = ctx.vdata()?;
            let g = ctx.graph(&vd)?;
            let dens = invariant_density(&ctx.t, &vd)?;
            let r = json!({
                "V": vd.v.iter().map(|x| ctx.number(x)).collect::<Vec<_>>(),
                "J": vd.j.iter().map(|j| json!({"lo": qbeta_json(&j.lo), "hi": qbeta_json(&j.hi)})).collect::<Vec<_>>(),
                "merge_times": vd.m.iter().map(|(x, k)| json!({"point": qbeta_json(x), "k": k})).collect::<Vec<_>>(),
                "edges": g.edges.iter().map(|&(x, y, a)| json!({"from": x, "to": y, "digit": qbeta_json(&ctx.t.digits()[a])})).collect::<Vec<_>>(),
                "density": dens.weights,
                "density_exact": dens.exact.as_ref().map(|h| h.iter().map(qbeta_json).collect::<Vec<_>>()),
                "c_const": g.c_const(),
            });
            ctx.report("vset", None, r)
        }
        Cmd::Natext { c } => {
            let ctx = Ctx::load(&c)?;
            let vd = ctx.vdata()?;
            let g = ctx.graph(&vd)?;
            let depth = ctx.depth(&g);
            let ne = tiling::natext_domain(&ctx.t, &vd, &g, depth);
            ctx.write_svg(render::natext_svg(ctx.f(), &ne))?;
            let r = json!({
                "area": ne.area,
                "area_upper": ne.area_upper,
                "err": ne.err,
                "cell": ne.cell,
                "pieces": ne.pieces.iter().map(|p| json!({
                    "J": {"lo": qbeta_json(&p.j.lo), "hi": qbeta_json(&p.j.hi)},
                    "measure": p.measure,
                    "measure_upper": p.measure_upper,
                    "points": p.cloud.len(),
                })).collect::<Vec<_>>(),
            });
            ctx.report("natext", Some(depth), r)
        }
        Cmd::Tiles { c, radius } => {
            let ctx = Ctx::load(&c)?;
            let vd = ctx.vdata()?;
            let g = ctx.graph(&vd)?;
            let depth = ctx.depth(&g);
            let cs = tiling::clouds(&g, depth);
            let patch = tiling::tile_patch(&ctx.t, &vd, radius)?;
            ctx.write_svg(render::tiles_svg(ctx.f(), &patch, &cs))?;
            let r = json!({
                "clouds": cs.iter().map(cloud_json).collect::<Vec<_>>(),
                "patch": patch.iter().map(|p| json!({"x": qbeta_json(&p.x), "vertex": p.vertex, "offset": p.offset.coords, "err": p.offset.rad})).collect::<Vec<_>>(),
            });
            ctx.report("tiles", Some(depth), r)
        }
        Cmd::Periodic { c } => {
            let ctx = Ctx::load(&c)?;
            let p = tiling::purely_periodic_points(&ctx.t, ctx.budget(100_000))?;
            ctx.report("periodic", None, periodic_json(&ctx, &p))
        }
        Cmd::CheckF { c } => {
            let ctx = Ctx::load(&c)?;
            let p = tiling::purely_periodic_points(&ctx.t, ctx.budget(100_000))?;
            let r = json!({ "F": tiling::check_f(&p), "periodic": periodic_json(&ctx, &p) });
            ctx.report("check-f", None, r)
        }
        Cmd::CheckW { c } => {
            let ctx = Ctx::load(&c)?;
            let p = tiling::purely_periodic_points(&ctx.t, 100_000)?;
            let r = match tiling::check_w(&ctx.t, &p, ctx.budget(300))? {
                WCheck::Holds { x, eps, witnesses } => json!({
                    "W": "holds",
                    "x": qbeta_json(&x),
                    "eps": ctx.number(&eps),
                    "witnesses": witnesses.iter().map(|w| json!({"y": qbeta_json(&w.y), "z": ctx.number(&w.z), "k": w.k})).collect::<Vec<_>>(),
                }),
                WCheck::FailsByBudget { eps, examined } => json!({
                    "W": "unknown",
                    "eps": ctx.number(&eps),
                    "examined": examined,
                }),
            };
            ctx.report("check-w", None, r)
        }
        Cmd::Degree { c } => {
            let ctx = Ctx::load(&c)?;
            let p = tiling::purely_periodic_points(&ctx.t, 100_000)?;
            let samples = ctx.samples()?;
            let max_k = ctx.budget(500);
            let reports = samples
                .iter()
                .map(|z| tiling::tiles_containing(&ctx.t, &p, z, max_k))
                .collect::<Result<Vec<_>, _>>()?;
            let (min, hist) = tiling::covering_degree_estimate(&ctx.t, &p, &samples, max_k)?;
            let r = json!({
                "min_count": min,
                "histogram": hist.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
                "samples": reports.iter().map(|m| json!({
                    "z": qbeta_json(&m.z),
                    "k": m.k,
                    "count": m.count,
                    "stable": m.stable,
                    "owners": m.owners.iter().map(qbeta_json).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            ctx.report("degree", None, r)
        }
        Cmd::Sofic { c } => {
            let ctx = Ctx::load(&c)?;
            let t = &ctx.t;
            let r = match sofic::soficity_check(t, ctx.budget(100_000))? {
                Soficity::NotSofic { witness, upper } => json!({
                    "sofic": false,
                    "witness": qbeta_json(&witness),
                    "upper": upper,
                }),
                Soficity::Sofic(ends) => {
                    let a = sofic::build_automaton(t, 100_000)?;
                    let memory = a.sft_memory();
                    json!({
                        "sofic": true,
                        "endpoints": ends.iter().map(|e| {
                            let mut v = expansion_json(t, &e.expansion.canonical());
                            v["point"] = qbeta_json(&e.point);
                            v["upper"] = json!(e.upper);
                            v["digit"] = digit_json(&t.digits()[e.digit]);
                            v
                        }).collect::<Vec<_>>(),
                        "automaton": a.to_json(t),
                        "dot": a.to_dot(t),
                        "finite_type": memory.is_some(),
                        "memory": memory,
                        "forbidden": a.forbidden_words().map(|w| words_json(t, &w)),
                    })
                }
            };
            ctx.report("sofic", None, r)
        }
        Cmd::DecideTiling { c } => {
            let ctx = Ctx::load(&c)?;
            if !sofic::soficity_check(&ctx.t, 100_000)?.is_sofic() {
                return Err(fail(4, "not sofic"));
            }
            let vd = ctx.vdata()?;
            let g = ctx.graph(&vd)?;
            let d = sofic::decide_tiling(&ctx.t, &g, ctx.budget(2_000_000))?;
            let r = json!({
                "verdict": d.verdict,
                "pairs": d.pairs.iter().map(|s| json!({"delta": ctx.number(&s.delta), "p": s.p, "q": s.q})).collect::<Vec<_>>(),
                "deltas": d.deltas(ctx.f()).iter().map(|x| ctx.number(x)).collect::<Vec<_>>(),
                "states": d.transducer.states.len(),
                "transitions": d.transducer.edges.len(),
                "sccs": d.sccs,
            });
            ctx.report("decide-tiling", None, r)
        }
        Cmd::Translates { c, lattice_scale, points } => {
            let ctx = Ctx::load(&c)?;
            let vd = ctx.vdata()?;
            let g = ctx.graph(&vd)?;
            let depth = ctx.depth(&g);
            let scene = tiling::torus_translates(&ctx.t, &vd, &g, depth, lattice_scale, points)?;
            let owners: Vec<QBeta> = vd.v.clone();
            ctx.write_svg(render::translates_svg(ctx.f(), &owners, &scene))?;
            let r = json!({
                "scale": scene.scale,
                "translates": scene.translates,
                "histogram": scene.histogram,
                "samples": scene.samples,
                "err": scene.err,
            });
            ctx.report("translates", Some(depth), r)
        }
    };
    Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.cmd {
        Cmd::Expand { c, .. }
        | Cmd::Vset { c }
        | Cmd::Natext { c }
        | Cmd::Tiles { c, .. }
        | Cmd::Periodic { c }
        | Cmd::CheckF { c }
        | Cmd::CheckW { c }
        | Cmd::Degree { c }
        | Cmd::Sofic { c }
        | Cmd::DecideTiling { c }
        | Cmd::Translates { c, .. } => c.out.clone(),
    };
    match run(cli) {
        Ok(s) => match out {
            Some(p) => match write(&p, &s) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {}", e.msg);
                    ExitCode::from(e.code)
                }
            },
            None => {
                print!("{}", s);
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
