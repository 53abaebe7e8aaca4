//! Compressed sparse row storage for symmetric operators and a multifrontal
//! LDLᵀ factorization with nested-dissection ordering on structured grids.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Symmetric matrix stored with its full (upper and lower) pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn zeros(n: usize) -> Self {
        CsrMatrix {
            n,
            indptr: vec![0; n + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        CsrMatrix {
            n: d.len(),
            indptr: (0..=d.len()).collect(),
            indices: (0..d.len()).collect(),
            values: d.to_vec(),
        }
    }

    /// Builds a matrix from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, j, v) in triplets {
            rows[i].push((j, v));
        }
        let mut b = RowBuilder::new(n);
        for row in rows.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
            for &(j, v) in row.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == j => last.1 += v,
                    _ => merged.push((j, v)),
                }
            }
            b.push_row(merged.into_iter());
        }
        b.finish()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.indptr[i]..self.indptr[i + 1];
        match self.indices[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                s += self.values[k] * x[self.indices[k]];
            }
            *yi = s;
        }
    }

    pub fn quad(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            let mut t = 0.0;
            for k in self.indptr[i]..self.indptr[i + 1] {
                t += self.values[k] * y[self.indices[k]];
            }
            s += x[i] * t;
        }
        s
    }

    /// Largest |a_ij - a_ji| relative to the largest |a_ij|.
    pub fn asymmetry(&self) -> f64 {
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                den = den.max(v.abs());
                num = num.max((v - self.get(j, i)).abs());
            }
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self + s * other`, on the union pattern.
    pub fn add_scaled(&self, s: f64, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let mut b = RowBuilder::new(self.n);
        for i in 0..self.n {
            let mut a = self.row(i).peekable();
            let mut o = other.row(i).map(|(j, v)| (j, s * v)).peekable();
            let mut merged = Vec::new();
            loop {
                match (a.peek().copied(), o.peek().copied()) {
                    (Some((ja, va)), Some((jo, vo))) => {
                        if ja == jo {
                            merged.push((ja, va + vo));
                            a.next();
                            o.next();
                        } else if ja < jo {
                            merged.push((ja, va));
                            a.next();
                        } else {
                            merged.push((jo, vo));
                            o.next();
                        }
                    }
                    (Some(e), None) => {
                        merged.push(e);
                        a.next();
                    }
                    (None, Some(e)) => {
                        merged.push(e);
                        o.next();
                    }
                    (None, None) => break,
                }
            }
            b.push_row(merged.into_iter());
        }
        b.finish()
    }

    /// `self - sigma * diag(mass)`.
    pub fn shifted(&self, sigma: f64, mass: &[f64]) -> CsrMatrix {
        self.add_scaled(-sigma, &CsrMatrix::diagonal(mass))
    }

    pub fn scaled(&self, s: f64) -> CsrMatrix {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= s);
        m
    }

    /// Coordinate-list text: one `row col value` line per stored entry,
    /// values with 17 significant digits.
    pub fn to_coo_text(&self) -> String {
        let mut s = String::with_capacity(self.nnz() * 40);
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                let _ = writeln!(s, "{} {} {:.16e}", i, j, v);
            }
        }
        s
    }

    pub fn from_coo_text(n: usize, text: &str) -> Result<Self> {
        let mut t = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse_err = || Error::Parse(format!("coo line {}: {line:?}", ln + 1));
            let i: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(parse_err)?;
            let j: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(parse_err)?;
            let v: f64 = it.next().and_then(|x| x.parse().ok()).ok_or_else(parse_err)?;
            if i >= n || j >= n {
                return Err(parse_err());
            }
            t.push((i, j, v));
        }
        Ok(CsrMatrix::from_triplets(n, t))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[i * self.n + j] += v;
            }
        }
        d
    }
}

/// Row-by-row CSR construction; each pushed row must have sorted, distinct columns.
pub struct RowBuilder {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl RowBuilder {
    pub fn new(n: usize) -> Self {
        RowBuilder {
            n,
            indptr: vec![0],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn push_row(&mut self, entries: impl Iterator<Item = (usize, f64)>) {
        for (j, v) in entries {
            debug_assert!(j < self.n);
            self.indices.push(j);
            self.values.push(v);
        }
        self.indptr.push(self.indices.len());
    }

    pub fn finish(self) -> CsrMatrix {
        assert_eq!(self.indptr.len(), self.n + 1, "row count");
        CsrMatrix {
            n: self.n,
            indptr: self.indptr,
            indices: self.indices,
            values: self.values,
        }
    }
}

/// Connectivity hint used to pick a fill-reducing ordering.
#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    /// Row-major grid (last axis fastest) whose couplings stay within
    /// offsets {-1, 0, 1} on each axis; `periodic` axes wrap.
    Grid { shape: Vec<usize>, periodic: Vec<bool> },
    /// No structure known: natural order with an elimination tree.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

struct Block {
    start: usize,
    size: usize,
    structure: Vec<usize>,
    /// `(size + structure.len()) x size`, row-major; strict lower part of the
    /// top square is L11, the rest is L21.
    panel: Vec<f64>,
}

/// LDLᵀ factorization without pivoting of a symmetric sparse matrix.
pub struct Ldlt {
    n: usize,
    perm: Vec<usize>,
    iperm: Vec<usize>,
    blocks: Vec<Block>,
    diag: Vec<f64>,
    inertia: Inertia,
    min_abs_pivot: f64,
}

const LEAF_SIZE: usize = 64;
const PANEL: usize = 48;

impl Ldlt {
    pub fn factor(a: &CsrMatrix, layout: &Layout) -> Result<Ldlt> {
        let n = a.n();
        let (perm, blocks_def) = match layout {
            Layout::Grid { shape, periodic } => {
                if shape.iter().product::<usize>() != n || shape.len() != periodic.len() {
                    return Err(Error::GridMismatch(format!(
                        "layout {shape:?} does not describe {n} unknowns"
                    )));
                }
                nested_dissection(shape, periodic)
            }
            Layout::General => ((0..n).collect(), (0..n).map(|i| (i, 1, None)).collect()),
        };
        let mut iperm = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            iperm[old] = new;
        }

        // Symbolic pass.
        let nb = blocks_def.len();
        let mut block_of = vec![0usize; n];
        for (b, &(start, size, _)) in blocks_def.iter().enumerate() {
            for p in start..start + size {
                block_of[p] = b;
            }
        }
        let mut parent: Vec<Option<usize>> = blocks_def.iter().map(|d| d.2).collect();
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); nb];
        let mut structures: Vec<Vec<usize>> = Vec::with_capacity(nb);
        let mut mark = vec![usize::MAX; n];
        for b in 0..nb {
            let (start, size, _) = blocks_def[b];
            let last = start + size;
            let mut s = Vec::new();
            for p in start..last {
                for (w, _) in a.row(perm[p]) {
                    let q = iperm[w];
                    if q >= last && mark[q] != b {
                        mark[q] = b;
                        s.push(q);
                    }
                }
            }
            for &c in &children[b] {
                for &q in &structures[c] {
                    if q < start {
                        return Err(Error::Singular("invalid assembly tree".into()));
                    }
                    if q >= last && mark[q] != b {
                        mark[q] = b;
                        s.push(q);
                    }
                }
            }
            s.sort_unstable();
            if matches!(layout, Layout::General) {
                parent[b] = s.first().map(|&q| block_of[q]);
            }
            if let Some(pb) = parent[b] {
                if let Some(&q) = s.first() {
                    if q < blocks_def[pb].0 {
                        return Err(Error::Singular("invalid assembly tree".into()));
                    }
                }
                children[pb].push(b);
            } else if !s.is_empty() {
                return Err(Error::Singular("root block with nonempty structure".into()));
            }
            structures.push(s);
        }

        // Numeric pass.
        let scale = a.diag().iter().fold(0.0f64, |m, v| m.max(v.abs())).max(a.max_abs());
        let tiny = scale * 1e-14;
        let mut diag = vec![0.0; n];
        let mut inertia = Inertia::default();
        let mut min_abs_pivot = f64::INFINITY;
        let mut pending: Vec<Option<Vec<f64>>> = vec![None; nb];
        let mut pos = vec![usize::MAX; n];
        let mut blocks = Vec::with_capacity(nb);
        for (b, structure) in structures.into_iter().enumerate() {
            let (start, size, _) = blocks_def[b];
            let s = structure.len();
            let f = size + s;
            for k in 0..size {
                pos[start + k] = k;
            }
            for (k, &q) in structure.iter().enumerate() {
                pos[q] = size + k;
            }
            let mut front = vec![0.0; f * f];
            for k in 0..size {
                let p = start + k;
                for (w, v) in a.row(perm[p]) {
                    let q = iperm[w];
                    if q >= start {
                        let lq = pos[q];
                        front[k * f + lq] += v;
                        if lq >= size {
                            front[lq * f + k] += v;
                        }
                    }
                }
            }
            for &c in &children[b] {
                if let Some(upd) = pending[c].take() {
                    let cs = &blocks_def_structure(&blocks, c);
                    let m = cs.len();
                    let loc: Vec<usize> = cs.iter().map(|&q| pos[q]).collect();
                    for i in 0..m {
                        let row = loc[i] * f;
                        for j in 0..m {
                            front[row + loc[j]] += upd[i * m + j];
                        }
                    }
                }
            }
            partial_ldlt(&mut front, f, size, &mut diag[start..start + size], tiny);
            for &d in &diag[start..start + size] {
                min_abs_pivot = min_abs_pivot.min(d.abs());
                if d.abs() <= tiny {
                    inertia.zero += 1;
                } else if d < 0.0 {
                    inertia.negative += 1;
                } else {
                    inertia.positive += 1;
                }
            }
            let mut panel = vec![0.0; f * size];
            for i in 0..f {
                panel[i * size..(i + 1) * size].copy_from_slice(&front[i * f..i * f + size]);
            }
            if s > 0 {
                let mut upd = vec![0.0; s * s];
                for i in 0..s {
                    let src = (size + i) * f + size;
                    upd[i * s..(i + 1) * s].copy_from_slice(&front[src..src + s]);
                }
                pending[b] = Some(upd);
            }
            for k in 0..size {
                pos[start + k] = usize::MAX;
            }
            for &q in &structure {
                pos[q] = usize::MAX;
            }
            blocks.push(Block {
                start,
                size,
                structure,
                panel,
            });
        }

        Ok(Ldlt {
            n,
            perm,
            iperm,
            blocks,
            diag,
            inertia,
            min_abs_pivot,
        })
    }

    pub fn inertia(&self) -> Inertia {
        self.inertia
    }

    pub fn min_abs_pivot(&self) -> f64 {
        self.min_abs_pivot
    }

    /// Number of stored factor entries.
    pub fn factor_size(&self) -> usize {
        self.blocks.iter().map(|b| b.panel.len()).sum()
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.perm.iter().map(|&old| rhs[old]).collect();
        for b in &self.blocks {
            let (st, sz) = (b.start, b.size);
            for j in 0..sz {
                let yj = y[st + j];
                if yj == 0.0 {
                    continue;
                }
                for i in j + 1..sz {
                    y[st + i] -= b.panel[i * sz + j] * yj;
                }
            }
            for (i, &q) in b.structure.iter().enumerate() {
                let row = &b.panel[(sz + i) * sz..(sz + i + 1) * sz];
                let dot: f64 = row.iter().zip(&y[st..st + sz]).map(|(l, v)| l * v).sum();
                y[q] -= dot;
            }
        }
        for (v, d) in y.iter_mut().zip(&self.diag) {
            *v /= d;
        }
        for b in self.blocks.iter().rev() {
            let (st, sz) = (b.start, b.size);
            let mut acc = vec![0.0; sz];
            for (i, &q) in b.structure.iter().enumerate() {
                let yq = y[q];
                if yq == 0.0 {
                    continue;
                }
                let row = &b.panel[(sz + i) * sz..(sz + i + 1) * sz];
                for (a, l) in acc.iter_mut().zip(row) {
                    *a += l * yq;
                }
            }
            for j in (0..sz).rev() {
                let mut s = acc[j];
                for i in j + 1..sz {
                    s += b.panel[i * sz + j] * y[st + i];
                }
                y[st + j] -= s;
            }
        }
        let mut x = vec![0.0; self.n];
        for (p, v) in y.into_iter().enumerate() {
            x[self.perm[p]] = v;
        }
        debug_assert_eq!(self.iperm.len(), self.n);
        x
    }

    /// Solves for several right-hand sides at once.
    pub fn solve_many(&self, rhs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let r = rhs.len();
        if r == 0 {
            return Vec::new();
        }
        // Row p of `y` holds permuted unknown p for every right-hand side.
        let mut y = vec![0.0; self.n * r];
        for (p, &old) in self.perm.iter().enumerate() {
            for (c, b) in rhs.iter().enumerate() {
                y[p * r + c] = b[old];
            }
        }
        let mut tmp = Vec::new();
        for b in &self.blocks {
            let (st, sz, ns) = (b.start, b.size, b.structure.len());
            for j in 0..sz {
                let (head, tail) = y.split_at_mut((st + j + 1) * r);
                let yj = &head[(st + j) * r..];
                for i in j + 1..sz {
                    let l = b.panel[i * sz + j];
                    if l != 0.0 {
                        for (t, v) in tail[(i - j - 1) * r..(i - j) * r].iter_mut().zip(yj) {
                            *t -= l * v;
                        }
                    }
                }
            }
            if ns == 0 {
                continue;
            }
            tmp.clear();
            tmp.resize(ns * r, 0.0);
            // tmp = L21 · Y_blk
            unsafe {
                matrixmultiply::dgemm(
                    ns,
                    sz,
                    r,
                    1.0,
                    b.panel.as_ptr().add(sz * sz),
                    sz as isize,
                    1,
                    y.as_ptr().add(st * r),
                    r as isize,
                    1,
                    0.0,
                    tmp.as_mut_ptr(),
                    r as isize,
                    1,
                );
            }
            for (i, &q) in b.structure.iter().enumerate() {
                for (t, v) in y[q * r..(q + 1) * r].iter_mut().zip(&tmp[i * r..(i + 1) * r]) {
                    *t -= v;
                }
            }
        }
        for (p, d) in self.diag.iter().enumerate() {
            y[p * r..(p + 1) * r].iter_mut().for_each(|v| *v /= d);
        }
        let mut gathered = Vec::new();
        for b in self.blocks.iter().rev() {
            let (st, sz, ns) = (b.start, b.size, b.structure.len());
            let mut acc = vec![0.0; sz * r];
            if ns > 0 {
                gathered.clear();
                for &q in &b.structure {
                    gathered.extend_from_slice(&y[q * r..(q + 1) * r]);
                }
                // acc = L21ᵀ · Y_struct
                unsafe {
                    matrixmultiply::dgemm(
                        sz,
                        ns,
                        r,
                        1.0,
                        b.panel.as_ptr().add(sz * sz),
                        1,
                        sz as isize,
                        gathered.as_ptr(),
                        r as isize,
                        1,
                        0.0,
                        acc.as_mut_ptr(),
                        r as isize,
                        1,
                    );
                }
            }
            for j in (0..sz).rev() {
                let row = &mut y[(st + j) * r..(st + j + 1) * r];
                for (v, a) in row.iter_mut().zip(&acc[j * r..(j + 1) * r]) {
                    *v -= a;
                }
                let yj: Vec<f64> = row.to_vec();
                for i in 0..j {
                    let l = b.panel[j * sz + i];
                    if l != 0.0 {
                        for (a, v) in acc[i * r..(i + 1) * r].iter_mut().zip(&yj) {
                            *a += l * v;
                        }
                    }
                }
            }
        }
        let mut out = vec![vec![0.0; self.n]; r];
        for (p, &old) in self.perm.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                o[old] = y[p * r + c];
            }
        }
        out
    }
}

fn blocks_def_structure(blocks: &[Block], c: usize) -> &[usize] {
    &blocks[c].structure
}

/// Eliminates the first `size` pivots of the dense symmetric `f x f` front in
/// place (lower triangle holds L, trailing square becomes the Schur complement).
fn partial_ldlt(front: &mut [f64], f: usize, size: usize, diag: &mut [f64], tiny: f64) {
    let mut lcol = vec![0.0; PANEL];
    let mut k0 = 0;
    while k0 < size {
        let k1 = (k0 + PANEL).min(size);
        for j in k0..k1 {
            let mut d = front[j * f + j];
            if d.abs() <= tiny {
                d = if d < 0.0 { -tiny } else { tiny.max(f64::MIN_POSITIVE) };
            }
            diag[j] = d;
            let inv = 1.0 / d;
            for i in j + 1..f {
                front[i * f + j] *= inv;
            }
            let w = k1 - (j + 1);
            for (c, lc) in lcol.iter_mut().take(w).enumerate() {
                *lc = front[(j + 1 + c) * f + j];
            }
            for i in j + 1..f {
                let lij = front[i * f + j] * d;
                if lij == 0.0 {
                    continue;
                }
                let row = &mut front[i * f + j + 1..i * f + k1];
                for (r, lc) in row.iter_mut().zip(&lcol[..w]) {
                    *r -= lij * lc;
                }
            }
        }
        let m = f - k1;
        let kb = k1 - k0;
        if m > 0 {
            let mut wbuf = vec![0.0; m * kb];
            for i in 0..m {
                for j in 0..kb {
                    wbuf[i * kb + j] = front[(k1 + i) * f + k0 + j] * diag[k0 + j];
                }
            }
            let ptr = front.as_mut_ptr();
            // SAFETY: B reads columns k0..k1 of rows k1.., C writes columns
            // k1.. of rows k1..; the two regions are disjoint within `front`.
            unsafe {
                matrixmultiply::dgemm(
                    m,
                    kb,
                    m,
                    -1.0,
                    wbuf.as_ptr(),
                    kb as isize,
                    1,
                    ptr.add(k1 * f + k0) as *const f64,
                    1,
                    f as isize,
                    1.0,
                    ptr.add(k1 * f + k1),
                    f as isize,
                    1,
                );
            }
        }
        k0 = k1;
    }
}

#[derive(Clone, Copy)]
struct Axis {
    start: usize,
    len: usize,
    wrap: bool,
}

/// Returns the permutation (new -> old) and blocks (start, size, parent) in postorder.
fn nested_dissection(shape: &[usize], periodic: &[bool]) -> (Vec<usize>, Vec<(usize, usize, Option<usize>)>) {
    let n: usize = shape.iter().product();
    let mut strides = vec![1usize; shape.len()];
    for d in (0..shape.len().saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * shape[d + 1];
    }
    let axes: Vec<Axis> = shape
        .iter()
        .zip(periodic)
        .map(|(&len, &p)| Axis {
            start: 0,
            len,
            wrap: p && len > 2,
        })
        .collect();
    let mut nd = Nd {
        shape,
        strides: &strides,
        perm: Vec::with_capacity(n),
        blocks: Vec::new(),
    };
    nd.recurse(axes);
    (nd.perm, nd.blocks)
}

struct Nd<'a> {
    shape: &'a [usize],
    strides: &'a [usize],
    perm: Vec<usize>,
    blocks: Vec<(usize, usize, Option<usize>)>,
}

impl Nd<'_> {
    fn push_box(&mut self, axes: &[Axis]) -> Option<usize> {
        let count: usize = axes.iter().map(|a| a.len).product();
        if count == 0 {
            return None;
        }
        let start = self.perm.len();
        let mut idx = vec![0usize; axes.len()];
        loop {
            let mut lin = 0;
            for (d, a) in axes.iter().enumerate() {
                lin += ((a.start + idx[d]) % self.shape[d]) * self.strides[d];
            }
            self.perm.push(lin);
            let mut d = axes.len();
            loop {
                if d == 0 {
                    self.blocks.push((start, count, None));
                    return Some(self.blocks.len() - 1);
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < axes[d].len {
                    break;
                }
                idx[d] = 0;
            }
        }
    }

    fn recurse(&mut self, axes: Vec<Axis>) -> Option<usize> {
        let count: usize = axes.iter().map(|a| a.len).product();
        if count == 0 {
            return None;
        }
        if count <= LEAF_SIZE {
            return self.push_box(&axes);
        }
        let (d, ax) = axes
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.len.cmp(&b.1.len).then(b.0.cmp(&a.0)))
            .unwrap();
        if ax.len < 3 {
            return self.push_box(&axes);
        }
        let mut sep = axes.clone();
        let mut kids = Vec::new();
        if ax.wrap {
            sep[d] = Axis { start: ax.start, len: 1, wrap: false };
            let mut rest = axes.clone();
            rest[d] = Axis { start: ax.start + 1, len: ax.len - 1, wrap: false };
            kids.push(self.recurse(rest));
        } else {
            let mid = ax.len / 2;
            let mut left = axes.clone();
            left[d] = Axis { start: ax.start, len: mid, wrap: false };
            let mut right = axes.clone();
            right[d] = Axis { start: ax.start + mid + 1, len: ax.len - mid - 1, wrap: false };
            sep[d] = Axis { start: ax.start + mid, len: 1, wrap: false };
            kids.push(self.recurse(left));
            kids.push(self.recurse(right));
        }
        let s = self.push_box(&sep)?;
        for k in kids.into_iter().flatten() {
            self.blocks[k].2 = Some(s);
        }
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize, periodic: bool, shift: f64) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 - shift));
            if i + 1 < n || periodic {
                let j = (i + 1) % n;
                t.push((i, j, -1.0));
                t.push((j, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    fn grid_laplacian(shape: &[usize], shift: f64) -> CsrMatrix {
        let n: usize = shape.iter().product();
        let mut strides = vec![1; shape.len()];
        for d in (0..shape.len() - 1).rev() {
            strides[d] = strides[d + 1] * shape[d + 1];
        }
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 * shape.len() as f64 - shift));
            for d in 0..shape.len() {
                let c = (i / strides[d]) % shape[d];
                let j = i - c * strides[d] + ((c + 1) % shape[d]) * strides[d];
                t.push((i, j, -1.0));
                t.push((j, i, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, t)
    }

    #[test]
    fn solve_matches_dense_periodic_3d() {
        let shape = [9, 8, 10];
        let a = grid_laplacian(&shape, -0.3);
        let layout = Layout::Grid { shape: shape.to_vec(), periodic: vec![true; 3] };
        let f = Ldlt::factor(&a, &layout).unwrap();
        let b: Vec<f64> = (0..a.n()).map(|i| ((i * 37 % 11) as f64) - 5.0).collect();
        let x = f.solve(&b);
        let r = a.matvec(&x);
        let err = r.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert_eq!(f.inertia().positive, a.n());
    }

    #[test]
    fn solve_many_agrees_with_solve() {
        let shape = [9, 8, 10];
        let a = grid_laplacian(&shape, 0.7);
        let layout = Layout::Grid { shape: shape.to_vec(), periodic: vec![true; 3] };
        let f = Ldlt::factor(&a, &layout).unwrap();
        let rhs: Vec<Vec<f64>> = (0..5)
            .map(|c| (0..a.n()).map(|i| (((i + 3 * c) * 37 % 13) as f64) - 6.0).collect())
            .collect();
        let many = f.solve_many(&rhs);
        for (b, x) in rhs.iter().zip(&many) {
            let single = f.solve(b);
            let err = single.iter().zip(x).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            assert!(err < 1e-11, "{err}");
        }
    }

    #[test]
    fn inertia_counts_eigenvalues_below_shift() {
        // periodic 1-D Laplacian eigenvalues: 2 - 2cos(2πk/n)
        let n = 40;
        let shift = 1.3;
        let exact = (0..n)
            .filter(|&k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos() < shift)
            .count();
        let a = laplacian_1d(n, true, shift);
        for layout in [
            Layout::General,
            Layout::Grid { shape: vec![n], periodic: vec![true] },
        ] {
            let f = Ldlt::factor(&a, &layout).unwrap();
            assert_eq!(f.inertia().negative, exact);
        }
    }

    #[test]
    fn general_layout_solves_chain() {
        let a = laplacian_1d(200, false, -0.01);
        let f = Ldlt::factor(&a, &Layout::General).unwrap();
        let b: Vec<f64> = (0..200).map(|i| (i as f64).sin()).collect();
        let r = a.matvec(&f.solve(&b));
        assert!(r.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-9));
    }

    #[test]
    fn nested_dissection_is_a_permutation() {
        let (perm, blocks) = nested_dissection(&[12, 9, 8], &[true, false, true]);
        let mut seen = vec![false; perm.len()];
        perm.iter().for_each(|&p| seen[p] = true);
        assert!(seen.iter().all(|&s| s));
        assert_eq!(blocks.iter().filter(|b| b.2.is_none()).count(), 1);
    }

    #[test]
    fn coo_round_trip_is_exact() {
        let a = grid_laplacian(&[4, 5], 0.123456789012345678);
        let b = CsrMatrix::from_coo_text(a.n(), &a.to_coo_text()).unwrap();
        assert_eq!(a, b);
    }
}
