//! Planar curve topology and bivariate real solving.
//!
//! Pipeline: shear the curve so its leading `y`-coefficient is constant,
//! project critical `x`-values through resultants, validate the per-fiber
//! distinct-root counts by comparing an exact upper bound `K+` against a
//! modular lower bound `K-`, lift the fibers with the certified root
//! isolator, and connect vertices on adjacent fibers into a graph isotopic
//! to the real curve.  Solving `g = h = 0` reduces to the isolated real
//! points of `g^2 + h^2`.

use crate::dyadic::Dyadic;
use crate::interval::{ComplexDisk, DyadicInterval};
use crate::intpoly::IntPoly;
use crate::intpoly2::IntPoly2;
use crate::isolator::{isolate, refine, IsolateError, IsolatorConfig, RootResult};
use crate::modpoly::{ModPoly, PRIME_TABLE};
use crate::oracle::{AlgebraicReal, OracleHandle};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TopError {
    #[error("curve polynomial is not square-free; pass its square-free part")]
    NotSquareFree,
    #[error("input polynomials share a nonconstant factor")]
    NotCoprime,
    #[error("input polynomial is zero or constant")]
    Degenerate,
    #[error("no admissible shear succeeded after {0} attempts")]
    ShearExhausted(usize),
    #[error("refinement cap reached while separating roots")]
    SeparationCap,
    #[error(transparent)]
    Isolate(#[from] IsolateError),
}

/// Internal signal: the current shear or prime does not work; try the next.
enum Retry {
    Gate,
    Shear,
    Fatal(TopError),
}

impl From<IsolateError> for Retry {
    fn from(e: IsolateError) -> Self {
        Retry::Fatal(e.into())
    }
}

#[derive(Clone, Debug)]
pub struct TopOptions {
    pub seed: u64,
    /// Use only this shear value instead of the schedule.
    pub forced_shear: Option<i64>,
    /// Start the modular gate at this prime (must be in the prime table).
    pub forced_prime: Option<u64>,
    pub max_shears: usize,
    pub isolator: IsolatorConfig,
}

impl Default for TopOptions {
    fn default() -> Self {
        TopOptions {
            seed: 0,
            forced_shear: None,
            forced_prime: None,
            max_shears: 24,
            isolator: IsolatorConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Critical,
    Intermediate,
    Outer,
}

#[derive(Clone, Debug)]
pub struct TopVertex {
    pub x: DyadicInterval,
    pub y: DyadicInterval,
    pub kind: VertexKind,
    /// Multiplicity of the vertex as a root of its fiber polynomial.
    pub multiplicity: usize,
}

/// Vertices and edges of a graph isotopic to the real curve, in sheared
/// coordinates (`shear_s` records the substitution `x -> x + s*y`).
#[derive(Clone, Debug)]
pub struct CurveTopology {
    pub vertices: Vec<TopVertex>,
    pub edges: Vec<(usize, usize)>,
    pub components: usize,
    pub cycles: usize,
    pub shear_s: i64,
    pub prime: u64,
}

#[derive(Clone, Debug)]
pub struct SolutionBoxes {
    /// Pairwise-disjoint boxes, one real solution each, original coordinates.
    pub boxes: Vec<(DyadicInterval, DyadicInterval)>,
}

fn shear_schedule(n: usize, seed: u64, count: usize) -> Vec<i64> {
    let mut out = vec![0i64];
    let mut v = 1i64;
    while out.len() < count.min(9) {
        out.push(v);
        out.push(-v);
        v += 1;
    }
    let bound = (n as i64).pow(4).max(16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let s = rng.gen_range(-bound..=bound);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.truncate(count);
    out
}

/// Degree of `gcd(R^inf, Q)`: every common factor of `R` and `Q` counted
/// with its multiplicity in `Q`.
fn deg_gcd_inf(rstar: &IntPoly, q: &IntPoly) -> usize {
    if rstar.deg() == 0 || q.deg() == 0 {
        return 0;
    }
    let mut total = 0usize;
    let mut rest = q.clone();
    loop {
        let g = rstar.gcd(&rest);
        if g.deg() == 0 {
            return total;
        }
        total += g.deg();
        rest = rest.exact_div(&g).expect("gcd divides");
    }
}

/// Modular lower bound `K-` for the total distinct-root count over the
/// critical fibers; `None` signals an unusable prime.
fn k_minus(rstar: &IntPoly, sr: &[IntPoly], n_y: usize, p: u64) -> Option<i64> {
    let mut s_prev = ModPoly::reduce(rstar, p).monic();
    if s_prev.deg() != rstar.deg() {
        return None; // prime divides the leading coefficient
    }
    let mut total = 0i64;
    for i in 1..=n_y {
        if s_prev.deg() == 0 {
            break;
        }
        let sri = if i < sr.len() {
            ModPoly::reduce(&sr[i], p)
        } else {
            ModPoly::zero(p)
        };
        let s_i = s_prev.gcd(&sri);
        let r_i = s_prev.exact_div(&s_i).ok()?;
        total += (n_y as i64 - i as i64) * r_i.deg() as i64;
        s_prev = s_i;
    }
    Some(total)
}

/// Isolated roots of an integer polynomial, with the oracle handle retained
/// so the disks can be refined later.
struct IsolatedPoly {
    handle: OracleHandle,
    result: RootResult,
}

impl IsolatedPoly {
    fn isolate(p: &IntPoly, cfg: &IsolatorConfig) -> Result<Self, IsolateError> {
        let k = p.square_free_part().deg();
        let handle = OracleHandle::from_int(p.clone());
        let result = isolate(&handle, k, cfg)?;
        Ok(IsolatedPoly { handle, result })
    }

    fn refine(&mut self, kappa: i64, cfg: &IsolatorConfig) -> Result<(), IsolateError> {
        self.result = refine(&self.handle, &self.result, kappa, cfg)?;
        Ok(())
    }
}

fn overlap_pairs(a: &[ComplexDisk], b: &[ComplexDisk]) -> usize {
    let mut count = 0;
    for da in a {
        for db in b {
            if !da.disjoint(db) {
                count += 1;
            }
        }
    }
    count
}

/// An algebraic real number presented as a sign-change (or exact) interval.
fn algebraic_from_interval(p: &IntPoly, int: &DyadicInterval) -> AlgebraicReal {
    if p.eval_dyadic(&int.lo).is_zero() {
        AlgebraicReal::exact(int.lo.clone())
    } else if p.eval_dyadic(&int.hi).is_zero() {
        AlgebraicReal::exact(int.hi.clone())
    } else {
        AlgebraicReal::new(p.clone(), int.lo.clone(), int.hi.clone())
    }
}

/// Real-flagged disks of `r`, as (index, real interval) sorted left to right.
fn real_intervals(r: &RootResult) -> Vec<(usize, DyadicInterval)> {
    let mut out: Vec<(usize, DyadicInterval)> = r
        .disks
        .iter()
        .enumerate()
        .filter(|(i, _)| r.real_flags[*i])
        .map(|(i, d)| (i, d.real_interval()))
        .collect();
    out.sort_by(|a, b| a.1.lo.cmp(&b.1.lo));
    out
}

fn intervals_pairwise_disjoint(xs: &[DyadicInterval]) -> bool {
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i].intersects(&xs[j]) {
                return false;
            }
        }
    }
    true
}

/// One vertical fiber column of the topology graph.
struct Column {
    x: DyadicInterval,
    kind: VertexKind,
    /// `(y interval, multiplicity)` per real fiber root, bottom to top.
    verts: Vec<(DyadicInterval, usize)>,
    /// Position of the unique multiple real root, if any.
    exceptional: Option<usize>,
    /// Retained for solution-box refinement.
    fiber: Option<(OracleHandle, RootResult, AlgebraicReal)>,
}

struct Lifted {
    columns: Vec<Column>,
    prime: u64,
}

/// Shear-independent outcome consumed by `topology` and `solve_system`.
fn run_pipeline(
    fs: &IntPoly2,
    prime_cursor: &mut usize,
    forced_prime: Option<u64>,
    cfg: &IsolatorConfig,
) -> Result<Lifted, Retry> {
    let n_y = fs.deg_y();
    let fy = fs.deriv_y();
    let r = fs.resultant_y(&fy);
    if r.is_zero() {
        return Err(Retry::Fatal(TopError::NotSquareFree));
    }
    let rstar = r.square_free_part();
    let fx = fs.deriv_x();
    let fxstar = if fx.is_zero() {
        IntPoly2::constant(BigInt::one())
    } else {
        let g = fx.gcd(&fy);
        fx.exact_div(&g).expect("gcd divides")
    };
    let q = fxstar.resultant_y(&fy);
    let rhat = {
        let d1 = rstar.derivative();
        if d1.deg() >= 1 {
            d1.square_free_part()
        } else {
            d1
        }
    };

    // counting gate: exact upper bound vs modular lower bound
    let k_plus_total = n_y as i64 * rstar.deg() as i64 - r.deg() as i64
        + deg_gcd_inf(&rstar, &q) as i64;
    let mut gate_ok = false;
    let mut prime_used = forced_prime.unwrap_or(PRIME_TABLE[0]);
    if n_y == 1 {
        // linear in y: the fiber polynomial never has multiple roots, so
        // there is nothing for the modular count to confirm
        gate_ok = true;
    }
    let sr = if gate_ok { Vec::new() } else { fs.principal_subresultant_coeffs(&fy) };
    let tries = if gate_ok { 0 } else if forced_prime.is_some() { 1 } else { 4 };
    for _ in 0..tries {
        let p = forced_prime.unwrap_or_else(|| {
            let p = PRIME_TABLE[*prime_cursor % PRIME_TABLE.len()];
            *prime_cursor += 1;
            p
        });
        match k_minus(&rstar, &sr, n_y, p) {
            Some(km) => {
                assert!(km <= k_plus_total, "modular count exceeded exact bound");
                if km == k_plus_total {
                    gate_ok = true;
                    prime_used = p;
                    break;
                }
            }
            None => {}
        }
    }
    if !gate_ok {
        return Err(Retry::Gate);
    }

    // lift the critical x-values of R with multiplicities, match against Q
    let r_iso = if r.deg() >= 1 {
        Some(IsolatedPoly::isolate(&r, cfg).map_err(Retry::from)?)
    } else {
        None
    };
    let q_iso = if q.deg() >= 1 {
        Some(IsolatedPoly::isolate(&q, cfg).map_err(Retry::from)?)
    } else {
        None
    };
    let mut mult_q: Vec<usize> = r_iso
        .as_ref()
        .map(|r| vec![0; r.result.k()])
        .unwrap_or_default();
    if let (Some(ri), Some(qi)) = (&r_iso, &q_iso) {
        let d = rstar.gcd(&q.square_free_part()).deg();
        let (mut ri_d, mut qi_d) = (ri.result.clone(), qi.result.clone());
        let mut kappa = 64i64;
        loop {
            if overlap_pairs(&ri_d.disks, &qi_d.disks) == d {
                break;
            }
            if kappa > (1 << 16) {
                return Err(Retry::Fatal(TopError::SeparationCap));
            }
            ri_d = refine(&ri.handle, &ri_d, kappa, cfg).map_err(Retry::from)?;
            qi_d = refine(&qi.handle, &qi_d, kappa, cfg).map_err(Retry::from)?;
            kappa *= 2;
        }
        for (i, di) in ri_d.disks.iter().enumerate() {
            for (j, dj) in qi_d.disks.iter().enumerate() {
                if !di.disjoint(dj) {
                    mult_q[i] = qi_d.multiplicities[j];
                }
            }
        }
    }

    let mut r_iso = r_iso;
    let mut rhat_iso = if rhat.deg() >= 1 {
        Some(IsolatedPoly::isolate(&rhat, cfg).map_err(Retry::from)?)
    } else {
        None
    };

    // refine until all real critical and separating x-intervals are
    // pairwise disjoint, so the columns can be ordered left to right
    let mut kappa = 64i64;
    loop {
        let mut xs: Vec<DyadicInterval> = Vec::new();
        if let Some(ri) = &r_iso {
            xs.extend(real_intervals(&ri.result).into_iter().map(|(_, x)| x));
        }
        if let Some(hi) = &rhat_iso {
            xs.extend(real_intervals(&hi.result).into_iter().map(|(_, x)| x));
        }
        if intervals_pairwise_disjoint(&xs) {
            break;
        }
        if kappa > (1 << 16) {
            return Err(Retry::Fatal(TopError::SeparationCap));
        }
        if let Some(ri) = &mut r_iso {
            ri.refine(kappa, cfg).map_err(Retry::from)?;
        }
        if let Some(hi) = &mut rhat_iso {
            hi.refine(kappa, cfg).map_err(Retry::from)?;
        }
        kappa *= 2;
    }

    let mut columns: Vec<Column> = Vec::new();

    // critical columns: isolate f(alpha, y) with the gated root count
    if let Some(ri) = &r_iso {
        for (i, x_int) in real_intervals(&ri.result) {
            let k_plus = n_y as i64 - ri.result.multiplicities[i] as i64 + mult_q[i] as i64;
            assert!(k_plus >= 1 && k_plus <= n_y as i64);
            let alpha = algebraic_from_interval(&rstar, &x_int);
            let fh = OracleHandle::from_fiber(fs.ycoeffs().to_vec(), alpha.clone());
            let fres = isolate(&fh, k_plus as usize, cfg).map_err(Retry::from)?;
            let col = build_column(x_int, VertexKind::Critical, &fres, Some((fh, fres.clone(), alpha)))?;
            columns.push(col);
        }
    }

    // separating columns between critical values: full distinct-root count
    if let Some(hi) = &rhat_iso {
        for (_, x_int) in real_intervals(&hi.result) {
            let beta = algebraic_from_interval(&rhat, &x_int);
            let fh = OracleHandle::from_fiber(fs.ycoeffs().to_vec(), beta.clone());
            let fres = isolate(&fh, n_y, cfg).map_err(Retry::from)?;
            let col = build_column(x_int, VertexKind::Intermediate, &fres, None)?;
            columns.push(col);
        }
    }

    // outer columns beyond every critical and separating value
    let mut bound = Dyadic::one();
    for c in &columns {
        bound = Dyadic::max(&bound, &Dyadic::max(&c.x.lo.abs(), &c.x.hi.abs()));
    }
    let t = bound.ceil_log2() + 1;
    let big_x = BigInt::one() << t as u32;
    for sign in [-1i64, 1] {
        let xv = if sign < 0 { -big_x.clone() } else { big_x.clone() };
        let fiber: IntPoly = IntPoly::new(
            fs.ycoeffs().iter().map(|c| c.eval_bigint(&xv)).collect(),
        );
        let x_int = DyadicInterval::point(Dyadic::new(xv, 0));
        let verts = if fiber.deg() >= 1 {
            let k = fiber.square_free_part().deg();
            let h = OracleHandle::from_int(fiber);
            let fres = isolate(&h, k, cfg).map_err(Retry::from)?;
            let col = build_column(x_int, VertexKind::Outer, &fres, None)?;
            col
        } else {
            Column {
                x: x_int,
                kind: VertexKind::Outer,
                verts: Vec::new(),
                exceptional: None,
                fiber: None,
            }
        };
        columns.push(verts);
    }

    columns.sort_by(|a, b| a.x.lo.cmp(&b.x.lo));
    Ok(Lifted {
        columns,
        prime: prime_used,
    })
}

/// Collects the real fiber roots into a sorted column; more than one
/// multiple real root means the shear is bad.
fn build_column(
    x: DyadicInterval,
    kind: VertexKind,
    fres: &RootResult,
    fiber: Option<(OracleHandle, RootResult, AlgebraicReal)>,
) -> Result<Column, Retry> {
    let mut verts: Vec<(DyadicInterval, usize)> = real_intervals(fres)
        .into_iter()
        .map(|(i, y)| (y, fres.multiplicities[i]))
        .collect();
    verts.sort_by(|a, b| a.0.lo.cmp(&b.0.lo));
    let mut exceptional = None;
    for (pos, (_, m)) in verts.iter().enumerate() {
        if *m >= 2 {
            if exceptional.is_some() {
                return Err(Retry::Shear);
            }
            exceptional = Some(pos);
        }
    }
    if kind != VertexKind::Critical && exceptional.is_some() {
        // a separating fiber must be square-free; bad separation
        return Err(Retry::Shear);
    }
    Ok(Column {
        x,
        kind,
        verts,
        exceptional,
        fiber,
    })
}

/// Connects vertices on adjacent columns.  Simple columns match one-to-one
/// by vertical order; at a column with a multiple vertex, the outermost
/// branches match in order and every remaining branch ends at that vertex.
fn connect(columns: &[Column]) -> Result<(Vec<TopVertex>, Vec<(usize, usize)>), Retry> {
    let mut vertices = Vec::new();
    let mut base = Vec::with_capacity(columns.len());
    for c in columns {
        base.push(vertices.len());
        for (y, m) in &c.verts {
            vertices.push(TopVertex {
                x: c.x.clone(),
                y: y.clone(),
                kind: c.kind,
                multiplicity: *m,
            });
        }
    }
    let mut edges = Vec::new();
    for w in 0..columns.len().saturating_sub(1) {
        let (a, b) = (&columns[w], &columns[w + 1]);
        let (na, nb) = (a.verts.len(), b.verts.len());
        let (ba, bb) = (base[w], base[w + 1]);
        match (a.exceptional, b.exceptional) {
            (None, None) => {
                if na != nb {
                    return Err(Retry::Shear);
                }
                for i in 0..na {
                    edges.push((ba + i, bb + i));
                }
            }
            (Some(m), None) => {
                let above = na - m - 1;
                if nb < m + above {
                    return Err(Retry::Shear);
                }
                for i in 0..m {
                    edges.push((ba + i, bb + i));
                }
                for i in 0..above {
                    edges.push((ba + m + 1 + i, bb + nb - above + i));
                }
                for i in m..nb - above {
                    edges.push((ba + m, bb + i));
                }
            }
            (None, Some(m)) => {
                let above = nb - m - 1;
                if na < m + above {
                    return Err(Retry::Shear);
                }
                for i in 0..m {
                    edges.push((ba + i, bb + i));
                }
                for i in 0..above {
                    edges.push((ba + na - above + i, bb + m + 1 + i));
                }
                for i in m..na - above {
                    edges.push((ba + i, bb + m));
                }
            }
            (Some(_), Some(_)) => return Err(Retry::Shear),
        }
    }
    Ok((vertices, edges))
}

fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Strips x-only (vertical line) content and validates square-freeness.
fn prepare_curve(f: &IntPoly2) -> Result<IntPoly2, TopError> {
    if f.is_zero() || f.total_degree() == 0 {
        return Err(TopError::Degenerate);
    }
    let c = f.content_x();
    let mut g = if c.deg() >= 1 || c.leading().abs() > BigInt::one() {
        f.exact_div_x(&c).expect("content divides")
    } else {
        f.clone()
    };
    if g.deg_y() == 0 {
        // only vertical lines remained; nothing with y-extent to trace
        return Err(TopError::Degenerate);
    }
    if g.leading_y().leading().sign() == num_bigint::Sign::Minus {
        g = g.neg();
    }
    let sq = g.gcd(&g.deriv_y());
    if sq.total_degree() >= 1 {
        return Err(TopError::NotSquareFree);
    }
    Ok(g)
}

/// Computes a graph isotopic to the real curve `f = 0`.
pub fn topology(f: &IntPoly2, opts: &TopOptions) -> Result<CurveTopology, TopError> {
    let g = prepare_curve(f)?;
    let shears = match opts.forced_shear {
        Some(s) => vec![s],
        None => shear_schedule(g.total_degree(), opts.seed, opts.max_shears),
    };
    let mut prime_cursor = 0usize;
    let mut attempts = 0usize;
    for &s in &shears {
        let fs = g.shear(s);
        if fs.leading_y().deg() >= 1 {
            continue;
        }
        attempts += 1;
        match run_pipeline(&fs, &mut prime_cursor, opts.forced_prime, &opts.isolator) {
            Ok(lifted) => match connect(&lifted.columns) {
                Ok((vertices, edges)) => {
                    let components = component_count(vertices.len(), &edges);
                    let cycles = edges.len() + components - vertices.len();
                    return Ok(CurveTopology {
                        vertices,
                        edges,
                        components,
                        cycles,
                        shear_s: s,
                        prime: lifted.prime,
                    });
                }
                Err(Retry::Fatal(e)) => return Err(e),
                Err(_) => continue,
            },
            Err(Retry::Fatal(e)) => return Err(e),
            Err(_) => continue,
        }
    }
    Err(TopError::ShearExhausted(attempts))
}

/// Per-critical-fiber diagnostics from an accepted run: the isolating
/// x-interval of the critical value (in sheared coordinates) and the
/// distinct-root count declared for its fiber by the counting gate.
#[derive(Clone, Debug)]
pub struct FiberCount {
    pub x: DyadicInterval,
    pub count: usize,
}

/// Validation hook for the counting gate: runs the same shear/prime loop as
/// `topology`, but reports the accepted shear, the accepted prime, the number
/// of shear attempts consumed, and the per-critical-fiber root counts.
pub fn gate_diagnostics(
    f: &IntPoly2,
    opts: &TopOptions,
) -> Result<(i64, u64, usize, Vec<FiberCount>), TopError> {
    let g = prepare_curve(f)?;
    let shears = match opts.forced_shear {
        Some(s) => vec![s],
        None => shear_schedule(g.total_degree(), opts.seed, opts.max_shears),
    };
    let mut prime_cursor = 0usize;
    let mut attempts = 0usize;
    for &s in &shears {
        let fs = g.shear(s);
        if fs.leading_y().deg() >= 1 {
            continue;
        }
        attempts += 1;
        match run_pipeline(&fs, &mut prime_cursor, opts.forced_prime, &opts.isolator) {
            Ok(lifted) => {
                let counts = lifted
                    .columns
                    .iter()
                    .filter(|c| c.kind == VertexKind::Critical)
                    .map(|c| FiberCount {
                        x: c.x.clone(),
                        count: c.fiber.as_ref().expect("critical columns keep fibers").1.k(),
                    })
                    .collect();
                return Ok((s, lifted.prime, attempts, counts));
            }
            Err(Retry::Fatal(e)) => return Err(e),
            Err(_) => continue,
        }
    }
    Err(TopError::ShearExhausted(attempts))
}

/// Isolating boxes for the real solutions of `g = h = 0`, via the isolated
/// real points of `g^2 + h^2`.
pub fn solve_system(g: &IntPoly2, h: &IntPoly2, opts: &TopOptions) -> Result<SolutionBoxes, TopError> {
    if g.is_zero() || h.is_zero() {
        return Err(TopError::Degenerate);
    }
    if g.gcd(h).total_degree() >= 1 {
        return Err(TopError::NotCoprime);
    }
    let mut f = g.mul(g).add(&h.mul(h));
    let c = f.content_x();
    if c.deg() >= 1 || c.leading().abs() > BigInt::one() {
        f = f.exact_div_x(&c).expect("content divides");
    }
    if f.deg_y() >= 1 {
        let sq = f.gcd(&f.deriv_y());
        if sq.total_degree() >= 1 {
            f = f.exact_div(&sq).expect("gcd divides");
        }
    }
    if f.deg_y() == 0 {
        // both inputs y-free and coprime: no common zeros
        return Ok(SolutionBoxes { boxes: Vec::new() });
    }
    let shears = match opts.forced_shear {
        Some(s) => vec![s],
        None => shear_schedule(f.total_degree(), opts.seed, opts.max_shears),
    };
    let mut prime_cursor = 0usize;
    let mut attempts = 0usize;
    for &s in &shears {
        let fs = f.shear(s);
        if fs.leading_y().deg() >= 1 {
            continue;
        }
        attempts += 1;
        match run_pipeline(&fs, &mut prime_cursor, opts.forced_prime, &opts.isolator) {
            Ok(lifted) => match unshear_solutions(lifted, s, &opts.isolator) {
                Ok(boxes) => return Ok(boxes),
                Err(Retry::Fatal(e)) => return Err(e),
                Err(_) => continue,
            },
            Err(Retry::Fatal(e)) => return Err(e),
            Err(_) => continue,
        }
    }
    Err(TopError::ShearExhausted(attempts))
}

/// Maps each critical-column real vertex back through `x = x^ - s*y^` and
/// refines until the boxes are pairwise disjoint.
fn unshear_solutions(lifted: Lifted, s: i64, cfg: &IsolatorConfig) -> Result<SolutionBoxes, Retry> {
    struct Sol {
        alpha: AlgebraicReal,
        handle: OracleHandle,
        fiber: RootResult,
        vert: usize,
    }
    let mut sols: Vec<Sol> = Vec::new();
    for col in lifted.columns {
        if col.kind != VertexKind::Critical {
            // any real point of a sum-of-squares curve is singular, hence
            // critical; a separating column with vertices means a bad run
            if !col.verts.is_empty() {
                return Err(Retry::Shear);
            }
            continue;
        }
        let (handle, fiber, alpha) = col.fiber.expect("critical column keeps its fiber");
        // every real point of a sum-of-squares curve is a multiple fiber
        // root, so the lift step already rejected columns with two of them
        let mut vert = None;
        for i in 0..fiber.k() {
            if fiber.real_flags[i] {
                if vert.is_some() {
                    return Err(Retry::Shear);
                }
                vert = Some(i);
            }
        }
        if let Some(vert) = vert {
            sols.push(Sol {
                alpha,
                handle,
                fiber,
                vert,
            });
        }
    }
    let sd = Dyadic::from_int(s);
    let mut kappa = 64i64;
    loop {
        let boxes: Vec<(DyadicInterval, DyadicInterval)> = sols
            .iter()
            .map(|sol| {
                let x_int = sol.alpha.interval();
                let y_int = sol.fiber.disks[sol.vert].real_interval();
                (x_int.sub(&y_int.scale(&sd)), y_int)
            })
            .collect();
        let mut ok = true;
        'outer: for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].0.intersects(&boxes[j].0) && boxes[i].1.intersects(&boxes[j].1) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            return Ok(SolutionBoxes { boxes });
        }
        if kappa > (1 << 14) {
            return Err(Retry::Fatal(TopError::SeparationCap));
        }
        for sol in &mut sols {
            sol.alpha.refine_below(&Dyadic::pow2(-kappa));
            sol.fiber = refine(&sol.handle, &sol.fiber, kappa, cfg).map_err(Retry::from)?;
        }
        kappa *= 2;
    }
}
