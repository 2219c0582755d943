//! Path pointers over a rooted forest.
//!
//! [`LinkCut`] is a link-cut tree with a lazy assignment tag, so setting the
//! value of every node on a vertical path costs amortized O(log n).
//! [`NaivePointers`] walks parent links and serves as the reference.

const NIL: usize = usize::MAX;

/// Values stored on forest nodes, with bulk assignment along vertical paths.
pub trait PathPointers {
    /// New isolated node holding `val`.
    fn add_node(&mut self, val: u64) -> usize;
    /// Release an isolated node for reuse.
    fn free_node(&mut self, x: usize);
    /// Make the root `child` a child of `parent`.
    fn link(&mut self, child: usize, parent: usize);
    /// Detach `child` from its parent.
    fn cut(&mut self, child: usize);
    /// Set `val` on every node from `u` up to its ancestor `anc`, inclusive.
    fn assign_path(&mut self, u: usize, anc: usize, val: u64);
    fn get(&mut self, u: usize) -> u64;
    /// Work counter: rotations or parent steps.
    fn work(&self) -> u64;
}

#[derive(Clone, Debug)]
struct LcNode {
    ch: [usize; 2],
    p: usize,
    val: u64,
    tag: Option<u64>,
}

impl LcNode {
    fn fresh(val: u64) -> Self {
        LcNode { ch: [NIL, NIL], p: NIL, val, tag: None }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinkCut {
    t: Vec<LcNode>,
    free: Vec<usize>,
    rotations: u64,
}

impl LinkCut {
    pub fn new() -> Self {
        Self::default()
    }

    fn is_root(&self, x: usize) -> bool {
        let p = self.t[x].p;
        p == NIL || (self.t[p].ch[0] != x && self.t[p].ch[1] != x)
    }

    fn apply(&mut self, x: usize, v: u64) {
        if x != NIL {
            self.t[x].val = v;
            self.t[x].tag = Some(v);
        }
    }

    fn push(&mut self, x: usize) {
        if let Some(v) = self.t[x].tag.take() {
            let [a, b] = self.t[x].ch;
            self.apply(a, v);
            self.apply(b, v);
        }
    }

    fn rotate(&mut self, x: usize) {
        self.rotations += 1;
        let p = self.t[x].p;
        let g = self.t[p].p;
        let dir = usize::from(self.t[p].ch[1] == x);
        let c = self.t[x].ch[dir ^ 1];
        if !self.is_root(p) {
            let pd = usize::from(self.t[g].ch[1] == p);
            self.t[g].ch[pd] = x;
        }
        self.t[x].p = g;
        self.t[x].ch[dir ^ 1] = p;
        self.t[p].p = x;
        self.t[p].ch[dir] = c;
        if c != NIL {
            self.t[c].p = p;
        }
    }

    fn splay(&mut self, x: usize) {
        let mut stack = vec![x];
        let mut y = x;
        while !self.is_root(y) {
            y = self.t[y].p;
            stack.push(y);
        }
        while let Some(z) = stack.pop() {
            self.push(z);
        }
        while !self.is_root(x) {
            let p = self.t[x].p;
            if !self.is_root(p) {
                let g = self.t[p].p;
                let zigzig = (self.t[g].ch[0] == p) == (self.t[p].ch[0] == x);
                self.rotate(if zigzig { p } else { x });
            }
            self.rotate(x);
        }
    }

    fn access(&mut self, x: usize) {
        let mut last = NIL;
        let mut y = x;
        while y != NIL {
            self.splay(y);
            self.t[y].ch[1] = last;
            last = y;
            y = self.t[y].p;
        }
        self.splay(x);
    }

    /// Root of the tree holding `x`.
    pub fn root(&mut self, x: usize) -> usize {
        self.access(x);
        let mut y = x;
        loop {
            self.push(y);
            match self.t[y].ch[0] {
                NIL => break,
                l => y = l,
            }
        }
        self.splay(y);
        y
    }
}

impl PathPointers for LinkCut {
    fn add_node(&mut self, val: u64) -> usize {
        match self.free.pop() {
            Some(i) => {
                self.t[i] = LcNode::fresh(val);
                i
            }
            None => {
                self.t.push(LcNode::fresh(val));
                self.t.len() - 1
            }
        }
    }

    fn free_node(&mut self, x: usize) {
        self.access(x);
        debug_assert!(self.t[x].ch == [NIL, NIL], "freeing a node that is still linked");
        self.t[x] = LcNode::fresh(0);
        self.free.push(x);
    }

    fn link(&mut self, child: usize, parent: usize) {
        self.access(child);
        debug_assert!(self.t[child].ch[0] == NIL, "link needs a root");
        self.t[child].p = parent;
    }

    fn cut(&mut self, child: usize) {
        self.access(child);
        let l = self.t[child].ch[0];
        if l != NIL {
            self.t[l].p = NIL;
            self.t[child].ch[0] = NIL;
        }
    }

    fn assign_path(&mut self, u: usize, anc: usize, val: u64) {
        self.access(u);
        self.splay(anc);
        // `anc` now roots the splay tree of the root-to-u path; its right
        // subtree holds the nodes strictly below it on that path.
        self.t[anc].val = val;
        let r = self.t[anc].ch[1];
        self.apply(r, val);
    }

    fn get(&mut self, u: usize) -> u64 {
        self.access(u);
        self.t[u].val
    }

    fn work(&self) -> u64 {
        self.rotations
    }
}

#[derive(Clone, Debug, Default)]
pub struct NaivePointers {
    parent: Vec<usize>,
    val: Vec<u64>,
    free: Vec<usize>,
    steps: u64,
}

impl NaivePointers {
    pub fn new() -> Self {
        Self::default()
    }
}

impl PathPointers for NaivePointers {
    fn add_node(&mut self, val: u64) -> usize {
        match self.free.pop() {
            Some(i) => {
                self.parent[i] = NIL;
                self.val[i] = val;
                i
            }
            None => {
                self.parent.push(NIL);
                self.val.push(val);
                self.parent.len() - 1
            }
        }
    }

    fn free_node(&mut self, x: usize) {
        self.parent[x] = NIL;
        self.free.push(x);
    }

    fn link(&mut self, child: usize, parent: usize) {
        self.parent[child] = parent;
    }

    fn cut(&mut self, child: usize) {
        self.parent[child] = NIL;
    }

    fn assign_path(&mut self, u: usize, anc: usize, val: u64) {
        let mut x = u;
        loop {
            self.steps += 1;
            self.val[x] = val;
            if x == anc {
                break;
            }
            x = self.parent[x];
            assert!(x != NIL, "assign_path: not an ancestor");
        }
    }

    fn get(&mut self, u: usize) -> u64 {
        self.val[u]
    }

    fn work(&self) -> u64 {
        self.steps
    }
}

/// Either implementation, picked at construction.
pub enum Pointers {
    LinkCut(LinkCut),
    Naive(NaivePointers),
}

impl Pointers {
    pub fn inner(&mut self) -> &mut dyn PathPointers {
        match self {
            Pointers::LinkCut(p) => p,
            Pointers::Naive(p) => p,
        }
    }

    pub fn work(&self) -> u64 {
        match self {
            Pointers::LinkCut(p) => p.work(),
            Pointers::Naive(p) => p.work(),
        }
    }
}
