use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use mtekit::alignment::{compose, load_alignment};
use mtekit::fixtures::{sample_spec, HUB_EN_MK, HUB_EN_SL, SAMPLE_CORPUS};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn mte(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mte"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn with_spec<'a>(spec: &'a str, args: &[&'a str]) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(["--spec", spec]);
    v
}

#[test]
fn expand_minimal() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["msd", "expand", "--form", "minimal", "--lang", "sl"]), "Vmn-----------e\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "Verb Type=main Aspect=perfective VForm=infinitive\n");
}

#[test]
fn empty_validation_input() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["msd", "validate", "--lang", "sl"]), "");
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
}

#[test]
fn invalid_msds_exit_one() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["msd", "validate", "--lang", "sl"]), "Ncmsg\nNcmsz\n");
    assert_eq!(r.code, 1);
    let lines: Vec<_> = r.stdout.lines().collect();
    assert_eq!(lines[0], "valid\tNcmsg\tNcmsg");
    assert!(lines[1].starts_with("invalid\tNcmsz\tinvalid value code `z` at position 4"));
}

#[test]
fn usage_errors_exit_two() {
    let r = mte(&["msd", "frobnicate"], "");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("Usage"));
    let r = mte(&["msd", "validate", "--no-such-flag"], "");
    assert_eq!(r.code, 2);
    let r = mte(&["msd", "validate", "--lang", "sl"], "Ncmsg\n");
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("--spec"));
    let r = mte(&["spec", "stats", "--spec", "/nonexistent/spec.tbl"], "");
    assert_eq!(r.code, 2);
}

#[test]
fn codec_flags_thread_through() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["msd", "relocalise", "--lang", "sl"]), "Ncmsg\nNcndl\n");
    assert_eq!(r.stdout, "Somer\nSosdm\n");
    let r = mte(&with_spec(&spec, &["msd", "relocalise", "--to", "english", "--lang", "sl"]), "Somer\n");
    assert_eq!(r.stdout, "Ncmsg\n");
    let r = mte(&with_spec(&spec, &["msd", "validate", "--lang", "sl", "--localise"]), "Somer\n");
    assert_eq!(r.stdout, "valid\tSomer\tSomer\n");
    let r = mte(&with_spec(&spec, &["msd", "validate", "--lang", "sl", "--lenient"]), "Ncmsg--\n");
    assert_eq!(r.stdout, "valid\tNcmsg--\tNcmsg\n");
    let r = mte(&with_spec(&spec, &["msd", "validate", "--lang", "sl", "--ordering", "common"]), "Vmn-----------e\n");
    assert_eq!(r.stdout, "valid\tVmn-----------e\tVmn-----------e\n");
    let listing = "Verb Type=main Aspect=perfective VForm=infinitive\n";
    let r = mte(&with_spec(&spec, &["msd", "encode", "--lang", "sl"]), listing);
    assert_eq!(r.stdout, "Vmen\n");
    let r = mte(&with_spec(&spec, &["msd", "encode", "--lang", "sl", "--localise"]), listing);
    assert_eq!(r.stdout, "Ggdn\n");
    let r = mte(&with_spec(&spec, &["msd", "decode"]), "sl:Ncmsg\n");
    assert_eq!(r.stdout, "sl:Ncmsg\tNoun Type=common Gender=masculine Number=singular Case=genitive\n");
}

#[test]
fn sort_with_keys() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["msd", "sort", "--keys", "--lang", "sl"]), "Sg\nNcmsg\nNcmsn\n");
    assert_eq!(r.stdout, "000.001.001.001.001\tNcmsn\n000.001.001.001.002\tNcmsg\n005.001\tSg\n");
}

#[test]
fn spec_reports_match_the_library() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["spec", "validate"]), "");
    assert_eq!((r.code, r.stdout), (0, sample_spec().check().to_tsv()));
    let r = mte(&with_spec(&spec, &["spec", "render", "--lang", "sl"]), "");
    assert_eq!(r.stdout, mtekit::ops::render_report(&sample_spec(), Some("sl")));
    let r = mte(&["spec", "diff", &spec, &spec], "");
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
    let r = mte(&with_spec(&spec, &["spec", "stats"]), "");
    assert!(r.stdout.starts_with("category\tname\tattributes\tvalues\tlanguages\nN\tNoun\t14\t"));
}

#[test]
fn split_then_merge() {
    let spec = data("sample-spec.tbl");
    let dir = tempfile::tempdir().unwrap();
    let section = dir.path().join("xx.tbl");
    let merged = dir.path().join("merged.tbl");
    let r = mte(&with_spec(&spec, &["spec", "split", "--seeds", "bg,mk", "--new-language", "xx"]), "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("LANG-SECTION xx\n"));
    std::fs::write(&section, &r.stdout).unwrap();
    let (section, merged) = (section.to_string_lossy().into_owned(), merged.to_string_lossy().into_owned());
    let r = mte(&with_spec(&spec, &["spec", "merge", &section, "-o", &merged]), "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.lines().all(|l| l.starts_with("FLAG_ADDED\t")), "{}", r.stdout);
    let r = mte(&["spec", "diff", &spec, &merged], "");
    assert!(r.stdout.lines().any(|l| l.starts_with("LANGUAGE_ADDED\txx")));
}

#[test]
fn split_in_tei() {
    let spec = data("sample-spec.tbl");
    let r = mte(&with_spec(&spec, &["spec", "split", "--seeds", "sl", "--new-language", "xx", "--format", "tei"]), "");
    assert!(r.stdout.starts_with('<'));
    let r = mte(&with_spec(&spec, &["spec", "split", "--seeds", "zz", "--new-language", "xx"]), "");
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("error\tsplit\txx\t"));
}

#[test]
fn lexicon_commands() {
    let spec = data("sample-spec.tbl");
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("sl.lex");
    std::fs::write(&lex, "dan\tdan\tNcmsn\nje\tbiti\tVa-r3s-n\nmrzel\tmrzel\tAgpmsnn\nsvet\tsvet\tNcmsx\n").unwrap();
    let lex = lex.to_string_lossy().into_owned();
    let r = mte(&with_spec(&spec, &["lex", "validate", &lex, "--lang", "sl"]), "");
    assert_eq!(r.code, 1);
    assert!(r.stdout.starts_with("error\tinvalid-msd\tline 4\t"));

    let good = dir.path().join("good.lex");
    std::fs::write(&good, "dan\tdan\tNcmsn\nje\tbiti\tVa-r3s-n\nmrzel\tmrzel\tAgpmsnn\njasen\tjasen\tAgpmsnn\n").unwrap();
    let good = good.to_string_lossy().into_owned();
    let corpus = data("sample-corpus.xml");
    let r = mte(&with_spec(&spec, &["lex", "index", &good, "--lang", "sl", "--corpus", &corpus]), "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("\nMSD Agpmsnn 3 2 mrzel/mrzel,jasen/jasen\n"), "{}", r.stdout);

    let bad = dir.path().join("bad.lex");
    std::fs::write(&bad, "dan dan Ncmsn\n").unwrap();
    let r = mte(&with_spec(&spec, &["lex", "validate", &bad.to_string_lossy(), "--lang", "sl"]), "");
    assert_eq!(r.stdout, "error\tline-error\tline 1\texpected 3 fields, found 1\n");
    let r = mte(&with_spec(&spec, &["lex", "validate", &bad.to_string_lossy(), "--lang", "sl", "--whitespace"]), "");
    assert_eq!(r.code, 0);
}

#[test]
fn corpus_commands() {
    let spec = data("sample-spec.tbl");
    let corpus = data("sample-corpus.xml");
    let r = mte(&with_spec(&spec, &["corpus", "validate", &corpus, "--strict"]), "");
    assert_eq!(r.code, 0, "{}", r.stdout);
    let r = mte(&with_spec(&spec, &["corpus", "attach-fslib", &corpus]), "");
    assert_eq!(r.stdout, SAMPLE_CORPUS);
    let r = mte(&["corpus", "stats", &corpus], "");
    assert!(r.stdout.starts_with("level\tid\t"));
    assert!(r.stdout.lines().last().unwrap().starts_with("text\tOsl.\t2\t"));
    let r = mte(&["corpus", "validate", &corpus, "--human"], "");
    assert_eq!(r.stdout, "0 error(s), 0 warning(s), 0 note(s)\n");
}

#[test]
fn align_compose_matches_the_library() {
    let (x, y) = (data("hub-en-mk.xml"), data("hub-en-sl.xml"));
    let r = mte(&["align", "compose", &x, &y], "");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let expected = compose(&load_alignment(HUB_EN_MK).unwrap().0, &load_alignment(HUB_EN_SL).unwrap().0).unwrap();
    assert_eq!(r.stdout, expected.to_xml());
    assert_eq!(r.stdout.matches("<link ").count(), 2);
    assert!(r.stdout.contains("n=\"1:3\""));

    let r = mte(&["align", "compose-multiway", &x, &y, "--include-hub"], "");
    assert!(r.stdout.starts_with("<linkGrp type=\"alignment\" corresp=\"oana-en.xml oana-mk.xml oana-sl.xml\">"));
    assert!(r.stdout.contains("n=\"2:1:3\""));
}

#[test]
fn align_null_report_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let excerpt = data("align-mk-sl-excerpt.xml");
    let r = mte(&["align", "validate", &excerpt], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("info\tnull-link\toana-sl.xml#Osl.4.12.2\t"));

    let hub = dir.path().join("hub-x.xml");
    std::fs::write(
        &hub,
        "<linkGrp corresp=\"h.xml x.xml\">\n  <link n=\"1:1\" targets=\"h.xml#h.1 x.xml#x.1\"/>\n  <link n=\"1:1\" targets=\"h.xml#h.2 x.xml#x.2\"/>\n</linkGrp>\n",
    )
    .unwrap();
    let other = dir.path().join("hub-y.xml");
    std::fs::write(&other, "<linkGrp corresp=\"h.xml y.xml\">\n  <link n=\"1:1\" targets=\"h.xml#h.1 y.xml#y.1\"/>\n</linkGrp>\n").unwrap();
    let nulls = dir.path().join("nulls.txt");
    let r = mte(
        &["align", "compose", &hub.to_string_lossy(), &other.to_string_lossy(), "--null-report", &nulls.to_string_lossy()],
        "",
    );
    assert!(r.stdout.contains("<!--link n=\"1:0\" targets=\"x.xml#x.2\"/-->"));
    assert_eq!(std::fs::read_to_string(&nulls).unwrap(), "NULL_LINK\t1:0\tx.xml#x.2\n");
    assert!(r.stderr.contains("1 null-link"));

    let corpus = data("sample-corpus.xml");
    let r = mte(&["align", "validate", &hub.to_string_lossy(), "--corpus", &format!("x.xml={corpus}")], "");
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout.matches("dangling-target").count(), 2);
}
