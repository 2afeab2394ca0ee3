//! Minimal XML writing and reading helpers shared by the emitters.
//!
//! Output is canonical: two-space indentation, attributes in the order they
//! are given, `&`, `<`, `>` and `"` escaped, one element per line.

use std::fmt::Write;

pub(crate) const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Default)]
pub(crate) struct XmlWriter {
    out: String,
    depth: usize,
}

impl XmlWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn start_tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.indent();
        let _ = write!(self.out, "<{name}");
        for (key, value) in attrs {
            let _ = write!(self.out, " {key}=\"{}\"", escape(value));
        }
    }

    pub fn open(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start_tag(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    pub fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.indent();
        let _ = writeln!(self.out, "</{name}>");
    }

    pub fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.start_tag(name, attrs);
        self.out.push_str("/>\n");
    }

    pub fn leaf(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        if text.is_empty() {
            return self.empty(name, attrs);
        }
        self.start_tag(name, attrs);
        let _ = writeln!(self.out, ">{}</{name}>", escape(text));
    }

    /// Writes `<!--text-->`; `text` must not contain `--`.
    pub fn comment(&mut self, text: &str) {
        self.indent();
        let _ = writeln!(self.out, "<!--{text}-->");
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Line and column of a node, for error messages.
pub(crate) fn position(node: roxmltree::Node<'_, '_>) -> (usize, usize) {
    let pos = node.document().text_pos_at(node.range().start);
    (pos.row as usize, pos.col as usize)
}

pub(crate) fn xml_attr<'a>(node: roxmltree::Node<'a, '_>, local: &str) -> Option<&'a str> {
    node.attribute((XML_NS, local))
}

/// Concatenated text content of a node.
pub(crate) fn text_of(node: roxmltree::Node<'_, '_>) -> String {
    node.descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writer_layout() {
        let mut w = XmlWriter::new();
        w.open("a", &[("x", "1&2")]);
        w.leaf("b", &[], "<t>");
        w.empty("c", &[("k", "\"q\"")]);
        w.comment("note");
        w.close("a");
        assert_eq!(
            w.finish(),
            "<a x=\"1&amp;2\">\n  <b>&lt;t&gt;</b>\n  <c k=\"&quot;q&quot;\"/>\n  <!--note-->\n</a>\n"
        );
    }
}
