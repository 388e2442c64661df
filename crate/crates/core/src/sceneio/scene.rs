//! Scene description files.
//!
//! One declaration per line:
//!
//! ```text
//! version 1
//! node <Kind> "<Name>" [under <path>] [layer=<n,..>] [mask=<n,..>] [pos=<x,y,z>]
//!      [rot=<ax,ay,az,angle>] [shape=sphere <r> | shape=box <hx,hy,hz>] [behavior=<id>] [<key>=<value> ..]
//! ```
//!
//! Paths after `under` are relative to the scene root and must name an earlier
//! declaration. Angles are radians. `#` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::lex::{self, Token};
use super::{num, FormatError, Pos};
use crate::devices::Role;
use crate::math::{Quat, Transform, Vec3};
use crate::physics::{Body, BodyKind, CollisionFilter, Restoring, RigidState, Shape};
use crate::scenegraph::{NodeId, NodeKind, NodeSpec, SceneTree, Timer};
use crate::{PhysicsWorld, TICK_RATE};

/// Behaviour ids a scene may bind.
pub const BEHAVIORS: [&str; 4] = ["bridge", "footplate", "player", "teleport"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclKind {
    Spatial,
    StaticBody,
    RigidBody,
    KinematicBody,
    Area,
    Camera,
    Origin,
    Controller,
    Timer,
    MeshStub,
}

impl DeclKind {
    pub const ALL: [DeclKind; 10] = [
        DeclKind::Spatial,
        DeclKind::StaticBody,
        DeclKind::RigidBody,
        DeclKind::KinematicBody,
        DeclKind::Area,
        DeclKind::Camera,
        DeclKind::Origin,
        DeclKind::Controller,
        DeclKind::Timer,
        DeclKind::MeshStub,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DeclKind::Spatial => "Spatial",
            DeclKind::StaticBody => "StaticBody",
            DeclKind::RigidBody => "RigidBody",
            DeclKind::KinematicBody => "KinematicBody",
            DeclKind::Area => "Area",
            DeclKind::Camera => "Camera",
            DeclKind::Origin => "Origin",
            DeclKind::Controller => "Controller",
            DeclKind::Timer => "Timer",
            DeclKind::MeshStub => "MeshStub",
        }
    }

    pub fn body_kind(self) -> Option<BodyKind> {
        match self {
            DeclKind::StaticBody => Some(BodyKind::Static),
            DeclKind::RigidBody => Some(BodyKind::Rigid),
            DeclKind::KinematicBody => Some(BodyKind::Kinematic),
            DeclKind::Area => Some(BodyKind::Area),
            _ => None,
        }
    }

    pub fn node_kind(self) -> NodeKind {
        match self {
            DeclKind::Spatial => NodeKind::Spatial,
            DeclKind::StaticBody | DeclKind::RigidBody | DeclKind::KinematicBody => NodeKind::PhysicsBody,
            DeclKind::Area => NodeKind::Area,
            DeclKind::Camera => NodeKind::Camera,
            DeclKind::Origin => NodeKind::Origin,
            DeclKind::Controller => NodeKind::Controller,
            DeclKind::Timer => NodeKind::Timer,
            DeclKind::MeshStub => NodeKind::MeshStub,
        }
    }
}

impl FromStr for DeclKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        DeclKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeDecl {
    Sphere(f64),
    Box([f64; 3]),
}

impl ShapeDecl {
    pub fn to_shape(self) -> Shape<f64> {
        match self {
            ShapeDecl::Sphere(r) => Shape::sphere(r),
            ShapeDecl::Box([x, y, z]) => Shape::cuboid(x, y, z),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeDecl {
    pub kind: DeclKind,
    pub name: String,
    /// Parent path relative to the root; `None` for direct children of the root.
    pub parent: Option<String>,
    pub layer: Option<Vec<u8>>,
    pub mask: Option<Vec<u8>>,
    pub pos: [f64; 3],
    /// Axis (x, y, z) and angle in radians.
    pub rot: Option<[f64; 4]>,
    pub shape: Option<ShapeDecl>,
    pub behavior: Option<String>,
    pub params: Vec<(String, String)>,
}

impl NodeDecl {
    pub fn new(kind: DeclKind, name: impl Into<String>) -> Self {
        Self {
            kind,
            name: name.into(),
            parent: None,
            layer: None,
            mask: None,
            pos: [0.0; 3],
            rot: None,
            shape: None,
            behavior: None,
            params: Vec::new(),
        }
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Path of this node relative to the root.
    pub fn path(&self) -> String {
        match &self.parent {
            Some(p) => format!("{p}/{}", self.name),
            None => self.name.clone(),
        }
    }

    pub fn local(&self) -> Transform<f64> {
        let [x, y, z] = self.pos;
        let rotation = match self.rot {
            Some([ax, ay, az, angle]) => Quat::from_axis_angle(Vec3::new(ax, ay, az), angle),
            None => Quat::identity(),
        };
        Transform::new(Vec3::new(x, y, z), rotation)
    }
}

fn join(xs: &[u8]) -> String {
    xs.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for NodeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {} \"{}\"", self.kind.as_str(), self.name)?;
        if let Some(p) = &self.parent {
            write!(f, " under {p}")?;
        }
        if let Some(l) = &self.layer {
            write!(f, " layer={}", join(l))?;
        }
        if let Some(m) = &self.mask {
            write!(f, " mask={}", join(m))?;
        }
        let [x, y, z] = self.pos;
        write!(f, " pos={},{},{}", num(x), num(y), num(z))?;
        if let Some([ax, ay, az, a]) = self.rot {
            write!(f, " rot={},{},{},{}", num(ax), num(ay), num(az), num(a))?;
        }
        match self.shape {
            Some(ShapeDecl::Sphere(r)) => write!(f, " shape=sphere {}", num(r))?,
            Some(ShapeDecl::Box([hx, hy, hz])) => write!(f, " shape=box {},{},{}", num(hx), num(hy), num(hz))?,
            None => {}
        }
        if let Some(b) = &self.behavior {
            write!(f, " behavior={b}")?;
        }
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct SceneDoc {
    pub version: Option<u32>,
    pub nodes: Vec<NodeDecl>,
    positions: Vec<Pos>,
}

/// Structural equality; source positions are ignored.
impl PartialEq for SceneDoc {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version && self.nodes == other.nodes
    }
}

impl SceneDoc {
    pub fn push(&mut self, decl: NodeDecl) {
        self.positions.push(Pos { line: self.nodes.len() + 1, column: 1 });
        self.nodes.push(decl);
    }

    pub fn find(&self, path: &str) -> Option<&NodeDecl> {
        self.nodes.iter().find(|n| n.path() == path)
    }

    fn pos_of(&self, i: usize) -> Pos {
        self.positions.get(i).copied().unwrap_or(Pos { line: i + 1, column: 1 })
    }
}

impl fmt::Display for SceneDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.version {
            writeln!(f, "version {v}")?;
        }
        for n in &self.nodes {
            writeln!(f, "{n}")?;
        }
        Ok(())
    }
}

fn valid_node_name(s: &str) -> bool {
    !s.is_empty() && s != "." && s != ".." && !s.contains(['/', '"']) && !s.chars().any(char::is_whitespace)
}

fn normalize_path(tok: &Token<'_>) -> Result<String, FormatError> {
    let trimmed = tok.text.strip_prefix('/').unwrap_or(tok.text);
    if tok.quoted || trimmed.is_empty() || !trimmed.split('/').all(valid_node_name) {
        return Err(FormatError::parse(tok.pos, "a parent path like Environment/Bridge"));
    }
    Ok(trimmed.to_string())
}

fn layers(text: &str, pos: Pos) -> Result<Vec<u8>, FormatError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.parse::<u8>() {
            Ok(n) if (1..=32).contains(&n) && part.chars().all(|c| c.is_ascii_digit()) => out.push(n),
            _ => return Err(FormatError::parse(pos, "layer numbers 1..32 separated by commas")),
        }
    }
    Ok(out)
}

fn positive(x: f64, pos: Pos) -> Result<f64, FormatError> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(FormatError::parse(pos, "a positive size"))
    }
}

pub fn parse_scene_bytes(bytes: &[u8]) -> Result<SceneDoc, FormatError> {
    parse_scene(lex::decode(bytes)?)
}

pub fn parse_scene(text: &str) -> Result<SceneDoc, FormatError> {
    let mut doc = SceneDoc::default();
    let mut declared: BTreeSet<String> = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let tokens = lex::tokenize(line, lineno)?;
        let Some(head) = tokens.first() else { continue };
        match head.text {
            "version" if !head.quoted => {
                if doc.version.is_some() || !doc.nodes.is_empty() {
                    return Err(FormatError::parse(head.pos, "version only as the first declaration"));
                }
                match tokens.get(1) {
                    Some(t) if t.text == "1" && !t.quoted => {}
                    Some(t) => return Err(FormatError::parse(t.pos, "version 1")),
                    None => return Err(FormatError::parse(Pos { line: lineno, column: line.chars().count() + 1 }, "version number")),
                }
                if let Some(t) = tokens.get(2) {
                    return Err(FormatError::parse(t.pos, "end of line"));
                }
                doc.version = Some(1);
            }
            "node" if !head.quoted => {
                let (decl, parent_pos) = parse_node(&tokens, line, lineno)?;
                if let Some(p) = &decl.parent {
                    if !declared.contains(p) {
                        return Err(FormatError::Semantic {
                            pos: parent_pos,
                            node: decl.name.clone(),
                            message: format!("parent {p:?} is not declared above"),
                        });
                    }
                }
                if !declared.insert(decl.path()) {
                    return Err(FormatError::Semantic {
                        pos: tokens[2].pos,
                        node: decl.name.clone(),
                        message: "duplicate name under the same parent".into(),
                    });
                }
                doc.positions.push(Pos { line: lineno, column: 1 });
                doc.nodes.push(decl);
            }
            _ => return Err(FormatError::parse(head.pos, "'node' or 'version'")),
        }
    }
    Ok(doc)
}

fn parse_node(tokens: &[Token<'_>], line: &str, lineno: usize) -> Result<(NodeDecl, Pos), FormatError> {
    let eol = Pos { line: lineno, column: line.chars().count() + 1 };
    let kind_tok = tokens.get(1).ok_or_else(|| FormatError::parse(eol, "node kind"))?;
    if kind_tok.quoted || !lex::is_ident(kind_tok.text) {
        return Err(FormatError::parse(kind_tok.pos, "node kind"));
    }
    let name_tok = tokens.get(2).ok_or_else(|| FormatError::parse(eol, "quoted node name"))?;
    if !name_tok.quoted || !valid_node_name(name_tok.text) {
        return Err(FormatError::parse(name_tok.pos, "quoted node name without '/', quotes or spaces"));
    }
    let kind: DeclKind = kind_tok.text.parse().map_err(|_| FormatError::Semantic {
        pos: kind_tok.pos,
        node: name_tok.text.to_string(),
        message: format!("unknown node kind {:?}", kind_tok.text),
    })?;
    let mut decl = NodeDecl::new(kind, name_tok.text);
    let mut idx = 3;
    let mut parent_pos = eol;
    if tokens.get(idx).is_some_and(|t| t.text == "under" && !t.quoted) {
        let p = tokens.get(idx + 1).ok_or_else(|| FormatError::parse(eol, "parent path"))?;
        decl.parent = Some(normalize_path(p)?);
        parent_pos = p.pos;
        idx += 2;
    }
    let mut seen = BTreeSet::new();
    while let Some(tok) = tokens.get(idx) {
        idx += 1;
        let (key, value) = match tok.text.split_once('=') {
            Some((k, v)) if !tok.quoted && lex::is_ident(k) => (k, v),
            _ => return Err(FormatError::parse(tok.pos, "key=value")),
        };
        if !seen.insert(key) {
            return Err(FormatError::parse(tok.pos, format!("a key other than the repeated {key:?}")));
        }
        let vpos = Pos { line: lineno, column: tok.pos.column + key.len() + 1 };
        match key {
            "layer" => decl.layer = Some(layers(value, vpos)?),
            "mask" => decl.mask = Some(layers(value, vpos)?),
            "pos" => decl.pos = lex::numbers::<3>(value, vpos)?,
            "rot" => {
                let r = lex::numbers::<4>(value, vpos)?;
                if r[0] == 0.0 && r[1] == 0.0 && r[2] == 0.0 {
                    return Err(FormatError::parse(vpos, "a non-zero rotation axis"));
                }
                decl.rot = Some(r);
            }
            "shape" => {
                let arg = tokens.get(idx).filter(|t| !t.quoted).ok_or_else(|| FormatError::parse(eol, "shape size"))?;
                idx += 1;
                decl.shape = Some(match value {
                    "sphere" => ShapeDecl::Sphere(positive(lex::finite(arg.text, arg.pos)?, arg.pos)?),
                    "box" => {
                        let h = lex::numbers::<3>(arg.text, arg.pos)?;
                        for x in h {
                            positive(x, arg.pos)?;
                        }
                        ShapeDecl::Box(h)
                    }
                    _ => return Err(FormatError::parse(vpos, "'sphere' or 'box'")),
                });
            }
            "behavior" => {
                if !lex::is_ident(value) {
                    return Err(FormatError::parse(vpos, "behavior id"));
                }
                decl.behavior = Some(value.to_string());
            }
            _ => {
                if value.is_empty() {
                    return Err(FormatError::parse(vpos, "parameter value"));
                }
                decl.params.push((key.to_string(), value.to_string()));
            }
        }
    }
    let body = kind.body_kind().is_some();
    let problem = if body && decl.shape.is_none() {
        Some("collision bodies need a shape")
    } else if !body && (decl.shape.is_some() || decl.layer.is_some() || decl.mask.is_some()) {
        Some("only collision bodies take shape, layer or mask")
    } else {
        None
    };
    if let Some(message) = problem {
        return Err(FormatError::Semantic { pos: kind_tok.pos, node: decl.name, message: message.into() });
    }
    Ok((decl, parent_pos))
}

/// A scene instantiated into a tree and physics world.
#[derive(Debug, Clone)]
pub struct LoadedWorld {
    pub tree: SceneTree<f64>,
    pub world: PhysicsWorld,
    /// Tree node for each declaration, in document order.
    pub ids: Vec<NodeId>,
    /// Parameters not consumed by the loader, keyed by node.
    pub params: BTreeMap<NodeId, Vec<(String, String)>>,
}

impl LoadedWorld {
    pub fn param(&self, id: NodeId, key: &str) -> Option<&str> {
        self.params.get(&id)?.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn state_hash(&self) -> u64 {
        self.world.state_hash(&self.tree)
    }
}

struct ParamReader<'a> {
    decl: &'a NodeDecl,
    pos: Pos,
    rest: Vec<(String, String)>,
}

impl<'a> ParamReader<'a> {
    fn new(decl: &'a NodeDecl, pos: Pos) -> Self {
        Self { decl, pos, rest: decl.params.clone() }
    }

    fn err(&self, message: String) -> FormatError {
        FormatError::Semantic { pos: self.pos, node: self.decl.name.clone(), message }
    }

    fn take(&mut self, key: &str) -> Option<String> {
        let i = self.rest.iter().position(|(k, _)| k == key)?;
        Some(self.rest.remove(i).1)
    }

    fn number(&mut self, key: &str, check: impl Fn(f64) -> bool) -> Result<Option<f64>, FormatError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => match v.parse::<f64>() {
                Ok(x) if x.is_finite() && check(x) => Ok(Some(x)),
                _ => Err(self.err(format!("bad value {v:?} for {key}"))),
            },
        }
    }

    fn flag(&mut self, key: &str) -> Result<Option<bool>, FormatError> {
        match self.take(key).as_deref() {
            None => Ok(None),
            Some("true") => Ok(Some(true)),
            Some("false") => Ok(Some(false)),
            Some(v) => Err(self.err(format!("{key} must be true or false, got {v:?}"))),
        }
    }
}

/// Builds the scene tree and physics world described by `doc`.
pub fn load_world(doc: &SceneDoc) -> Result<LoadedWorld, FormatError> {
    let mut tree = SceneTree::new(TICK_RATE);
    let mut world = PhysicsWorld::default();
    let mut ids = Vec::with_capacity(doc.nodes.len());
    let mut params = BTreeMap::new();
    for (i, decl) in doc.nodes.iter().enumerate() {
        let pos = doc.pos_of(i);
        let mut rd = ParamReader::new(decl, pos);
        if let Some(b) = &decl.behavior {
            if !BEHAVIORS.contains(&b.as_str()) {
                return Err(rd.err(format!("unknown behavior {b:?}")));
            }
        }
        let mut spec = NodeSpec::new(decl.name.clone(), decl.kind.node_kind()).with_local(decl.local());
        if let Some(b) = &decl.behavior {
            spec = spec.with_behavior(b.clone());
        }
        if decl.kind == DeclKind::Timer {
            let period = rd.number("period", |x| x > 0.0)?.unwrap_or(1.0);
            let one_shot = rd.flag("one_shot")?.unwrap_or(false);
            let autostart = rd.flag("autostart")?.unwrap_or(false);
            spec = spec.with_timer(Timer::new(period, one_shot, autostart));
        }
        if matches!(decl.kind, DeclKind::Controller | DeclKind::Camera) {
            if let Some(r) = rd.rest.iter().find(|(k, _)| k == "role").map(|(_, v)| v.clone()) {
                if Role::from_str(&r).is_err() {
                    return Err(rd.err(format!("unknown device role {r:?}")));
                }
            }
        }
        let parent = match &decl.parent {
            Some(p) => tree.get_node(tree.root(), p).map_err(|e| rd.err(e.to_string()))?,
            None => tree.root(),
        };
        let id = tree.spawn(parent, spec).map_err(|e| rd.err(e.to_string()))?;
        if let Some(kind) = decl.kind.body_kind() {
            let filter = CollisionFilter::from_layers(
                decl.layer.as_deref().unwrap_or(&[1]),
                decl.mask.as_deref().unwrap_or(&[1]),
            );
            let shape = decl.shape.expect("parser guarantees a shape").to_shape();
            let body = if kind == BodyKind::Rigid {
                let mass = rd.number("mass", |x| x > 0.0)?.unwrap_or(1.0);
                let inertia = rd.number("inertia", |x| x > 0.0)?.unwrap_or(0.1);
                let mut state = RigidState::new(mass, Vec3::splat(inertia));
                if let Some(g) = rd.number("gravity_scale", |_| true)? {
                    state.gravity_scale = g;
                }
                state.angular_damping = rd.number("damping", |x| x >= 0.0)?;
                if let Some(k) = rd.number("stiffness", |x| x >= 0.0)? {
                    state.restoring = Some(Restoring { stiffness: k, axis: Vec3::unit_x(), rest: decl.local().rotation });
                }
                Body::rigid(shape, filter, state)
            } else {
                Body::new(kind, shape, filter)
            };
            world.add_body(&tree, id, body).map_err(|e| rd.err(e.to_string()))?;
        }
        ids.push(id);
        if !rd.rest.is_empty() {
            params.insert(id, rd.rest);
        }
    }
    Ok(LoadedWorld { tree, world, ids, params })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::BodyKind;

    #[test]
    fn floor_line() {
        let doc = parse_scene(r#"node StaticBody "BottomFloor" layer=1 mask=2 pos=0,0,0 shape=box 5,0.1,5"#).unwrap();
        assert_eq!(doc.nodes.len(), 1);
        let n = &doc.nodes[0];
        assert_eq!(n.kind, DeclKind::StaticBody);
        assert_eq!(n.layer.as_deref(), Some(&[1][..]));
        assert_eq!(n.mask.as_deref(), Some(&[2][..]));
        assert_eq!(n.shape, Some(ShapeDecl::Box([5.0, 0.1, 5.0])));
        let w = load_world(&doc).unwrap();
        let b = w.world.body(w.ids[0]).unwrap();
        assert_eq!(b.kind, BodyKind::Static);
        assert_eq!((b.filter.layer, b.filter.mask), (0b1, 0b10));
    }

    #[test]
    fn empty_input() {
        assert!(parse_scene("").unwrap().nodes.is_empty());
        assert!(parse_scene("# just a comment\n\n   \n").unwrap().nodes.is_empty());
    }

    #[test]
    fn nested_board() {
        let text = "node Spatial \"Bridge\"\nnode Spatial \"Boards\" under Bridge\n\
                    node RigidBody \"Board1\" under Bridge/Boards layer=3 mask=2 pos=1,2,3 shape=box 0.4,0.05,0.6 inertia=0.01\n";
        let doc = parse_scene(text).unwrap();
        assert_eq!(doc.nodes[2].parent.as_deref(), Some("Bridge/Boards"));
        let w = load_world(&doc).unwrap();
        assert_eq!(w.tree.path_of(w.ids[2]), "/Bridge/Boards/Board1");
        let b = w.world.body(w.ids[2]).unwrap();
        assert_eq!((b.filter.layer, b.filter.mask), (0b100, 0b10));
        assert_eq!(b.rigid.as_ref().unwrap().inertia, Vec3::splat(0.01));
    }

    #[test]
    fn semantic_errors() {
        let e = parse_scene("node Widget \"X\"").unwrap_err();
        assert!(matches!(e, FormatError::Semantic { pos: Pos { line: 1, column: 6 }, .. }), "{e:?}");
        let e = parse_scene("node Spatial \"A\"\nnode Spatial \"A\"").unwrap_err();
        assert!(matches!(e, FormatError::Semantic { pos: Pos { line: 2, column: 14 }, .. }), "{e:?}");
        let e = parse_scene("node Spatial \"A\" under B\nnode Spatial \"B\"").unwrap_err();
        assert!(matches!(e, FormatError::Semantic { pos: Pos { line: 1, column: 24 }, .. }), "{e:?}");
        let e = parse_scene("node Area \"A\" layer=1").unwrap_err();
        assert!(matches!(e, FormatError::Semantic { .. }));
    }

    #[test]
    fn same_name_different_parent_is_fine() {
        let text = "node Spatial \"A\"\nnode Spatial \"B\"\nnode Spatial \"X\" under A\nnode Spatial \"X\" under B";
        assert_eq!(parse_scene(text).unwrap().nodes.len(), 4);
    }

    #[test]
    fn parse_errors_point_at_token() {
        let cases = [
            ("nod Spatial \"A\"", 1),
            ("node Spatial A", 14),
            ("node Spatial \"A\" pos=1,2", 22),
            ("node Spatial \"A\" pos=1,zz,3", 24),
            ("node Area \"A\" layer=0 shape=sphere 1", 21),
            ("node Area \"A\" shape=cone 1", 21),
            ("node Area \"A\" shape=sphere -1", 28),
            ("node Spatial \"A\" pos=1,2,3 pos=1,2,3", 28),
            ("node Spatial \"a/b\"", 14),
            ("version 2", 9),
        ];
        for (text, col) in cases {
            let e = parse_scene(text).unwrap_err();
            assert!(e.is_parse(), "{text}: {e:?}");
            assert_eq!(e.pos(), Pos { line: 1, column: col }, "{text}: {e}");
        }
    }

    #[test]
    fn unknown_behavior_rejected_at_load() {
        let doc = parse_scene("node Spatial \"A\" behavior=dance").unwrap();
        let e = load_world(&doc).unwrap_err();
        assert!(matches!(e, FormatError::Semantic { ref node, .. } if node == "A"), "{e:?}");
    }

    #[test]
    fn round_trip_with_rotation_and_params() {
        let text = "version 1\nnode Timer \"T\" period=0.2 one_shot=true\n\
                    node KinematicBody \"P\" pos=-4,0,0.1 rot=0,1,0,1.5707963267948966 shape=sphere 0.25 behavior=footplate force=90\n";
        let doc = parse_scene(text).unwrap();
        let again = parse_scene(&doc.to_string()).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.nodes[1].param("force"), Some("90"));
    }

    #[test]
    fn timer_params_reach_tree() {
        let w = load_world(&parse_scene("node Timer \"T\" period=0.2 one_shot=true autostart=true").unwrap()).unwrap();
        let t = w.tree.timer(w.ids[0]).unwrap();
        assert_eq!(t.period, 0.2);
        assert!(t.one_shot && t.autostart);
    }

    #[test]
    fn load_twice_same_hash() {
        let doc = parse_scene(
            "node StaticBody \"F\" pos=0,-0.1,0 shape=box 5,0.1,5\nnode RigidBody \"R\" pos=0,1,0 shape=sphere 0.2",
        )
        .unwrap();
        let a = load_world(&doc).unwrap();
        let b = load_world(&doc).unwrap();
        assert_eq!(a.state_hash(), b.state_hash());
    }
}
