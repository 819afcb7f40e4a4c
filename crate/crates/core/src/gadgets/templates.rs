//! Clause templates, one row per gadget, written with the variable names of
//! the construction. Boundary slots are substituted at build time and every
//! other name becomes a fresh auxiliary variable. `-` marks a negated
//! literal.

pub(crate) struct Template {
    pub slots: &'static [&'static str],
    pub aux: &'static [&'static str],
    pub clauses: &'static [&'static str],
}

pub(crate) const NE6: Template = Template {
    slots: &["x", "y"],
    aux: &["a", "b", "u", "v", "w"],
    clauses: &["x y a", "x y b", "a b u", "a b v", "a b w", "u v w"],
};

pub(crate) const P1: Template = Template {
    slots: &["x"],
    aux: &["a", "b", "c", "d", "e"],
    clauses: &["x a b", "a c d", "a b e", "a d e", "b c d", "b c e", "c d e"],
};

pub(crate) const NE9: Template = Template {
    slots: &["x", "y"],
    aux: &["a", "b", "c", "d", "e", "f"],
    clauses: &[
        "x a b", "y c d", "y e f", "c e f", "b c e", "a c f", "a d e", "a b d", "b d f",
    ],
};

pub(crate) const EQ13: Template = Template {
    slots: &["x", "y"],
    aux: &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
    clauses: &[
        "x a b", "y c d", "y e f", "a c g", "a e d", "a h i", "b e h", "b f h", "b g i", "c e i", "c f g", "d g h",
        "d f i",
    ],
};

pub(crate) const EQ4L: Template = Template {
    slots: &["x", "y", "z", "u"],
    aux: &["a", "b", "c", "d", "e", "f"],
    clauses: &[
        "x a e", "x b d", "x c f", "y a b", "y c e", "y d f", "z a f", "z c d", "z u b", "u a c", "u d e", "b e f",
    ],
};

pub(crate) const S: Template = Template {
    slots: &["x", "y", "z"],
    aux: &["a", "b", "c", "d", "e", "f"],
    clauses: &[
        "x a b", "y c d", "z e f", "a c f", "a d e", "b c e", "b d f", "-a -c -f", "-a -d -e", "-a -e -f", "-b -c -d",
        "-b -c -e", "-b -d -f",
    ],
};

pub(crate) const A: Template = Template {
    slots: &["x", "y"],
    aux: &["a", "b", "c", "d"],
    clauses: &[
        "-a -b -x", "-a -c -x", "-a -d -x", "-b -c -y", "-b -d -y", "-c -d -y", "a b c", "a b d", "a c d", "b c d",
    ],
};

pub(crate) const D: Template = Template {
    slots: &["x1", "x2", "x3", "x4", "x5", "x6"],
    aux: &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
    clauses: &[
        "-a -c -e", "-b -f -h", "-d -g -i", "a b d", "a d f", "a f i", "a h i", "b c d", "b c g", "b e g", "c g h",
        "c h i", "e f g", "e f i", "a g x1", "b i x2", "c f x3", "d e x4", "d h x5", "e h x6",
    ],
};

pub(crate) const G: Template = Template {
    slots: &["x", "y", "z"],
    aux: &["a", "b", "c", "d", "e", "f"],
    clauses: &[
        "-a -b -f", "-a -c -d", "-b -c -e", "-d -e -f", "a b f", "a c d", "b c e", "d e f", "a e x", "b d y", "c f z",
    ],
};

pub(crate) const H: Template = Template {
    slots: &["x", "y", "z"],
    aux: &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
    clauses: &[
        "-a -d -x", "-b -g -y", "-f -i -z", "-a -b -e", "-c -e -i", "-c -g -h", "-d -f -h", "a c f", "a f g", "a g h",
        "b c d", "b e h", "b h i", "c e i", "d e f", "d g i",
    ],
};

pub(crate) const C12: Template = Template {
    slots: &["x", "y"],
    aux: &["a", "b", "c", "d", "e", "f", "g", "h"],
    clauses: &[
        "-a -c -e", "-a -c -f", "-a -d -g", "-b -c -h", "-b -e -g", "-b -f -g", "-d -e -h", "-d -f -h", "a b x",
        "c d x", "e f x", "g h y",
    ],
};

pub(crate) const CHAIN22: Template = Template {
    slots: &["x1", "x2", "x3", "x4", "x5", "x6"],
    aux: &[],
    clauses: &["x1 x2", "-x2 -x3", "x3 x4", "-x4 -x5", "x5 x6", "-x6 -x1"],
};

pub(crate) const CHAIN22_NEG: Template = Template {
    slots: &["x1", "x2", "x3", "x4", "x5", "x6"],
    aux: &[],
    clauses: &["-x1 -x2 -x6", "-x3 -x4 -x5"],
};

pub(crate) const STAR22: Template = Template {
    slots: &["x1", "x2", "x3", "x4", "x5", "x6"],
    aux: &["y1", "y2", "y3", "y4", "y5", "y6", "y7", "y8", "y9"],
    clauses: &[
        "x1 y9 y9",
        "-x1 -y1 -y1",
        "-x1 -y2 -y2",
        "x2 y1 y1",
        "x2 y2 y2",
        "-x2 -y3 -y3",
        "x3 y3 y3",
        "-x3 -y4 -y4",
        "-x3 -y5 -y5",
        "x4 y4 y4",
        "x4 y5 y5",
        "-x4 -y6 -y6",
        "x5 y6 y6",
        "-x5 -y7 -y7",
        "-x5 -y8 -y8",
        "x6 y7 y7",
        "x6 y8 y8",
        "-x6 -y9 -y9",
    ],
};

pub(crate) const INC32: Template = Template {
    slots: &["x", "y", "z"],
    aux: &["a", "b", "c", "d", "e", "f"],
    clauses: &[
        "a b x", "c d y", "e f z", "a b c", "a b d", "a e f", "b e f", "c d e", "c d f", "-a -b -d", "-a -b -f",
        "-c -d -e", "-c -e -f",
    ],
};
