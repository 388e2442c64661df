//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use immerse::devices::{delivery_latency_ticks, fold_pin, SerialBus, VirtualArduino};
use immerse::math::{Quat, Transform, Vec3};
use immerse::physics::{interacts, overlap, should_scan, Body, BodyKind, CollisionFilter, PhysicsWorld, RigidState, Shape};
use immerse::scenegraph::{NodeKind, NodeSpec, SceneTree};
use immerse::sceneio::trace::fmt_tick_time;
use immerse::sceneio::{self, load_world, parse_scenario, parse_scene, TraceKind};
use immerse::{Runtime, RuntimeOptions, TICK_RATE};
use immerse_cli::{replay_check, simulate, RunConfig};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn fixture(name: &str) -> String {
    std::fs::read_to_string(Path::new(FIXTURES).join(name)).expect("fixture")
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn collision_matrix() -> Outcome {
    let start = Instant::now();
    let w = load_world(&parse_scene(&fixture("demo.scene")).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let id = |p: &str| w.tree.get_node(w.tree.root(), p).map_err(|e| e.to_string());
    let floor = id("Environment/BottomFloor")?;
    let player = id("Footplate/Player/PlayerCollisionShape")?;
    let board = id("Environment/Bridge/Board1")?;
    let got = [w.world.interacts(floor, player), w.world.interacts(player, board), w.world.interacts(floor, board)];
    ensure(got == [true, true, false], || format!("(floor,player),(player,bridge),(floor,bridge) = {got:?}"))?;

    let mut mismatches = 0;
    for bits in 0..65_536u32 {
        let (la, ma, lb, mb) = (bits & 15, bits >> 4 & 15, bits >> 8 & 15, bits >> 12 & 15);
        let (a, b) = (CollisionFilter::new(la, ma), CollisionFilter::new(lb, mb));
        let set = |m: u32| (0..4).filter(|i| m >> i & 1 == 1).collect::<BTreeSet<u32>>();
        let scan = |m, l| set(m).intersection(&set(l)).next().is_some();
        if should_scan(&a, &b) != scan(ma, lb) || interacts(&a, &b) != (scan(ma, lb) || scan(mb, la)) {
            mismatches += 1;
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} filter mismatches"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("matrix ok, 65536 pairs, 0 mismatches, {:?}", start.elapsed()))
}

fn footplate_protocol() -> Outcome {
    let start = Instant::now();
    let mut r = Runtime::from_text(&fixture("demo.scene"), &fixture("demo.scn"), RuntimeOptions::default())
        .map_err(|e| e.to_string())?;
    r.run().map_err(|e| e.to_string())?;
    let bytes: String = r
        .records()
        .iter()
        .filter(|x| x.kind == TraceKind::SerialTx)
        .map(|x| u8::from_str_radix(x.get("byte").unwrap().trim_start_matches("0x"), 16).unwrap() as char)
        .collect();
    ensure(bytes == "hl", || format!("serial bytes {bytes:?}"))?;
    let levels: Vec<&str> =
        r.records().iter().filter(|x| x.kind == TraceKind::PinChange).map(|x| x.get("level").unwrap()).collect();
    ensure(levels == ["HIGH", "LOW"], || format!("pin levels {levels:?}"))?;
    let (stopping, force, dt) = (3.0, 90.0, 1.0 / TICK_RATE as f64);
    let y = r.tree().translation(r.node("Footplate").unwrap()).y;
    let (lo, hi) = (stopping + 0.3, stopping + 0.3 + force * dt * dt);
    ensure((lo..=hi).contains(&y), || format!("y={y} outside [{lo}, {hi}]"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("bytes \"hl\", HIGH before LOW, y={y:.6} in [{lo:.6}, {hi:.6}], {:?}", start.elapsed()))
}

fn bridge_impulses() -> Outcome {
    let mut r = Runtime::from_text(&fixture("demo.scene"), &fixture("demo.scn"), RuntimeOptions::default())
        .map_err(|e| e.to_string())?;
    r.run().map_err(|e| e.to_string())?;
    let records: Vec<_> = r.records().iter().filter(|x| x.kind == TraceKind::Impulse).collect();
    ensure(records.len() == 5, || format!("{} impulse records", records.len()))?;
    for x in &records {
        let t = x.get("torque").unwrap();
        ensure(t == "0.020000,0.000000,0.000000", || format!("torque {t}"))?;
    }
    let boards: BTreeSet<_> = r.impulses().iter().map(|i| i.board).collect();
    ensure(boards.len() == 5, || format!("{} distinct boards", boards.len()))?;
    let mut worst: f64 = 0.0;
    for i in r.impulses() {
        // measured around the impulse itself, before damping or restoring act
        let state = r.world().body(i.board).unwrap().rigid.as_ref().unwrap();
        let expected = state.inverse_inertia_mul(Quat::identity(), i.torque);
        worst = worst.max(((i.omega_after - i.omega_before) - expected).norm());
    }
    ensure(worst <= 1e-9, || format!("max |dw - I^-1 tau| = {worst:e}"))?;
    Ok(format!("5 impulses of (0.02,0,0), max |dw - I^-1 tau| = {worst:e}"))
}

fn free_fall() -> Outcome {
    let mut tree = SceneTree::<f64>::default();
    let mut world = PhysicsWorld::<f64>::default();
    let id = tree
        .spawn(tree.root(), NodeSpec::new("Ball", NodeKind::PhysicsBody).at(Vec3::new(0.0, 10.0, 0.0)))
        .map_err(|e| e.to_string())?;
    world
        .add_body(&tree, id, Body::rigid(Shape::sphere(0.1), CollisionFilter::new(1, 0), RigidState::default()))
        .map_err(|e| e.to_string())?;
    for _ in 0..90 {
        world.step(&mut tree).map_err(|e| e.to_string())?;
    }
    let dt = 1.0 / 90.0;
    let expected = 10.0 - 9.8 * dt * dt * (90.0 * 91.0 / 2.0);
    let y = tree.global_transform(id).position.y;
    ensure((y - expected).abs() <= 1e-6, || format!("y={y} expected {expected}"))?;
    Ok(format!("y={y:.9}, closed form {expected:.9}, error {:e}", (y - expected).abs()))
}

fn broadphase_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut exact_pairs, mut missed) = (0usize, 0usize);
    for _ in 0..200 {
        let mut tree = SceneTree::<f64>::default();
        let mut world = PhysicsWorld::<f64>::default();
        let n = rng.gen_range(1..=64);
        let mut ids = Vec::with_capacity(n);
        for i in 0..n {
            let kind = [BodyKind::Static, BodyKind::Kinematic, BodyKind::Rigid, BodyKind::Area][rng.gen_range(0..4)];
            let nk = if kind == BodyKind::Area { NodeKind::Area } else { NodeKind::PhysicsBody };
            let id = tree.spawn(tree.root(), NodeSpec::new(format!("B{i}"), nk)).map_err(|e| e.to_string())?;
            let p = Vec3::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let axis = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            tree.set_local(id, Transform::new(p, Quat::from_axis_angle(axis, rng.gen_range(-3.0..3.0))));
            let shape = if rng.gen_bool(0.5) {
                Shape::sphere(rng.gen_range(0.05..1.0))
            } else {
                Shape::cuboid(rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0))
            };
            let filter = CollisionFilter::new(rng.gen_range(1..16), rng.gen_range(0..16));
            let body = if kind == BodyKind::Rigid {
                Body::rigid(shape, filter, RigidState::default())
            } else {
                Body::new(kind, shape, filter)
            };
            world.add_body(&tree, id, body).map_err(|e| e.to_string())?;
            ids.push(id);
        }
        let pairs = world.broadphase_pairs(&tree);
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                let (ba, bb) = (world.body(a).unwrap(), world.body(b).unwrap());
                if interacts(&ba.filter, &bb.filter)
                    && overlap(&ba.shape, &tree.global_transform(a), &bb.shape, &tree.global_transform(b))
                {
                    exact_pairs += 1;
                    if !pairs.contains(&(a.min(b), a.max(b))) {
                        missed += 1;
                    }
                }
            }
        }
    }
    ensure(missed == 0, || format!("{missed} of {exact_pairs} overlapping pairs missed"))?;
    ensure(exact_pairs > 0, || "no overlapping pairs generated".into())?;
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("200 worlds, {exact_pairs} overlapping pairs, 0 missed, {:?}", start.elapsed()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = |name: &str| RunConfig {
        scene: Path::new(FIXTURES).join("demo.scene"),
        scenario: Path::new(FIXTURES).join("demo.scn"),
        trace: dir.path().join(name),
        serial: immerse::devices::Transport::Virtual,
        sample_stride: 9,
    };
    let (a, b) = (cfg("a.trace"), cfg("b.trace"));
    simulate(&a).map_err(|e| e.to_string())?;
    simulate(&b).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&a.trace).map_err(|e| e.to_string())?;
    let last_tick = sceneio::parse_trace(&text).map_err(|e| format!("{e:?}"))?.last().map_or(0, |r| r.tick);
    ensure(last_tick >= 900, || format!("only {last_tick} ticks"))?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = replay_check(&a.trace, &b.trace, &mut out, &mut err);
    ensure(code == 0, || format!("replay_check exit {code}: {}", String::from_utf8_lossy(&out)))?;
    Ok(format!("{last_tick} ticks, {} bytes, byte-identical, replay_check exit 0", text.len()))
}

fn firmware_conformance() -> Outcome {
    let mut strings: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier = strings.clone();
    for _ in 0..8 {
        frontier = frontier
            .iter()
            .flat_map(|s| b"hlx".iter().map(move |&c| [s.as_slice(), &[c]].concat()))
            .collect();
        strings.extend(frontier.iter().cloned());
    }
    let full = strings.iter().filter(|s| s.len() == 8).count();
    let mut mismatches = 0;
    for s in &strings {
        let mut dev = VirtualArduino::new();
        dev.begin();
        s.iter().for_each(|&b| {
            dev.handle_byte(b);
        });
        let mut bus = SerialBus::default();
        let h = bus.open("virt0", 9600, 64).map_err(|e| e.to_string())?;
        bus.write(h, s, 0).map_err(|e| e.to_string())?;
        bus.pump(delivery_latency_ticks(s.len() as u64, 9600, TICK_RATE)).map_err(|e| e.to_string())?;
        if dev.pin8() != fold_pin(s) || bus.arduino().pin8() != fold_pin(s) {
            mismatches += 1;
        }
    }
    ensure(full == 6561, || format!("{full} strings of length 8"))?;
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("{} strings ({full} of length 8), 0 mismatches", strings.len()))
}

fn mutate(rng: &mut ChaCha8Rng, base: &[u8]) -> Vec<u8> {
    let mut v = base.to_vec();
    for _ in 0..rng.gen_range(1..6) {
        let at = rng.gen_range(0..=v.len());
        match rng.gen_range(0..3) {
            0 if at < v.len() => {
                v.remove(at);
            }
            1 if at < v.len() => v[at] = rng.gen(),
            _ => v.insert(at, b"\" #=,.-0123456789eE\nxyz"[rng.gen_range(0..23)]),
        }
    }
    v
}

fn parser_robustness() -> Outcome {
    let (scene_text, scn_text) = (fixture("demo.scene"), fixture("demo.scn"));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let outcome = std::panic::catch_unwind(move || {
        let mut rejected = [0usize; 2];
        for i in 0..10_000 {
            let random = |rng: &mut ChaCha8Rng| (0..rng.gen_range(0..256)).map(|_| rng.gen()).collect::<Vec<u8>>();
            let a = if i % 2 == 0 { random(&mut rng) } else { mutate(&mut rng, scene_text.as_bytes()) };
            let b = if i % 2 == 0 { random(&mut rng) } else { mutate(&mut rng, scn_text.as_bytes()) };
            if let Err(e) = sceneio::parse_scene_bytes(&a) {
                assert!(e.pos().line >= 1 && e.pos().column >= 1);
                rejected[0] += 1;
            }
            if let Err(e) = sceneio::parse_scenario_bytes(&b) {
                assert!(e.pos().line >= 1 && e.pos().column >= 1);
                rejected[1] += 1;
            }
        }
        rejected
    });
    let rejected = outcome.map_err(|_| "parser panicked".to_string())?;
    let scene = parse_scene(&fixture("demo.scene")).map_err(|e| e.to_string())?;
    let scn = parse_scenario(&fixture("demo.scn")).map_err(|e| e.to_string())?;
    ensure(parse_scene(&scene.to_string()).ok() == Some(scene), || "scene round-trip differs".into())?;
    ensure(parse_scenario(&scn.to_string()).ok() == Some(scn), || "scenario round-trip differs".into())?;
    Ok(format!(
        "2 x 10000 inputs, 0 panics, {} + {} structured rejections, corpus round-trips",
        rejected[0], rejected[1]
    ))
}

fn pacing() -> Outcome {
    let mut tree = SceneTree::<f64>::default();
    let mut world = PhysicsWorld::<f64>::default();
    for n in 1..=9000u64 {
        world.step(&mut tree).map_err(|e| e.to_string())?;
        if [90, 900, 9000].contains(&n) {
            let t = world.time();
            ensure(world.tick() == n && t == n as f64 / 90.0, || format!("tick {n}: t={t}"))?;
            let shown = fmt_tick_time(n, TICK_RATE);
            ensure(shown == format!("{}.000000", n / 90), || format!("tick {n} prints {shown}"))?;
        }
    }
    let (scene, scn) = (fixture("demo.scene"), fixture("demo.scn"));
    let start = Instant::now();
    let mut ticks = 0;
    for _ in 0..10 {
        let mut r = Runtime::from_text(&scene, &scn, RuntimeOptions::default()).map_err(|e| e.to_string())?;
        ticks += r.run().map_err(|e| e.to_string())?.ticks;
    }
    let rate = ticks as f64 / start.elapsed().as_secs_f64();
    ensure(rate >= 10_000.0, || format!("{rate:.0} ticks/s"))?;
    Ok(format!("t = n/90 exactly at 90/900/9000, demo {rate:.0} ticks/s"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("collision matrix", collision_matrix),
        ("footplate protocol", footplate_protocol),
        ("bridge impulses", bridge_impulses),
        ("integrator oracle", free_fall),
        ("broadphase soundness", broadphase_soundness),
        ("determinism", determinism),
        ("firmware conformance", firmware_conformance),
        ("parser robustness", parser_robustness),
        ("pacing", pacing),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
