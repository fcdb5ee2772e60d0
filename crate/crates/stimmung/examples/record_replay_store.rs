//! Builds the replay store that `stimmung augment` replays in CI.
//!
//! A replay store pins every translation and generation response, so runs
//! are deterministic and need no credentials. This example records the
//! store for the demo corpus from a hardcoded translation table; to record
//! against a real service, swap `translate_de` / `generated_texts` for
//! calls to your transport and keep the payload construction identical.
//!
//! Run from the repository root:
//!
//! ```text
//! cargo run -p stimmung --example record_replay_store
//! ```

use std::path::Path;

use serde_json::json;
use stimmung::augment::{generate_payload, translate_payload, ReplayStore};
use stimmung::config::RunConfig;

fn translate_de(english: &str) -> Option<&'static str> {
    Some(match english {
        "You people are disgusting trolls and liars" => {
            "Ihr Leute seid widerliche Trolle und Lügner"
        }
        "I hate these hypocrites so much" => "Ich hasse diese Heuchler so sehr",
        "You should all be ashamed, you spineless liars" => {
            "Ihr solltet euch alle schämen, ihr rückgratlosen Lügner"
        }
        "These commenters are disgusting and stupid" => {
            "Diese Kommentatoren sind widerlich und dumm"
        }
        "I hate this war propaganda" => "Ich hasse diese Kriegspropaganda",
        "You are all pathetic hateful trolls" => "Ihr seid alle erbärmliche hasserfüllte Trolle",
        "Everyone spreading these lies disgusts me" => {
            "Jeder der diese Lügen verbreitet ekelt mich an"
        }
        "These haters are vile and dumb" => "Diese Hasser sind abscheulich und dumm",
        "I hope both sides find peace soon" => "Ich hoffe beide Seiten finden bald Frieden",
        "The children deserve protection and help" => "Die Kinder verdienen Schutz und Hilfe",
        "Thank you for this balanced report" => "Danke für diesen ausgewogenen Bericht",
        "We should listen to each other more" => "Wir sollten einander mehr zuhören",
        _ => return None,
    })
}

fn generated_texts(label: &str) -> Vec<&'static str> {
    match label {
        "israel" => vec![
            "Ich stehe fest an der Seite Israels, die Geiseln müssen endlich nach Hause.",
            "Israel verteidigt seine Bürger gegen den Terror, das ist sein gutes Recht.",
            "Meine Solidarität gilt Israel und den Familien der Entführten.",
        ],
        "palestine" => vec![
            "Freiheit für Palästina, die Menschen in Gaza verdienen ein Leben in Würde.",
            "Die Blockade muss enden, die Kinder in Gaza leiden am meisten.",
            "Palästina braucht endlich einen eigenen Staat und echte Unterstützung.",
        ],
        "neutral" => vec![
            "Beide Seiten verlieren in diesem Krieg, nur Verhandlungen können das beenden.",
            "Der Konflikt ist komplizierter als jede Schlagzeile, hört beiden Seiten zu.",
            "Ich wünsche mir einen Waffenstillstand und Frieden für alle Menschen dort.",
        ],
        other => panic!("no canned generations for label {other:?}"),
    }
}

fn main() -> stimmung::Result<()> {
    let repo = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&repo.join("data/demo/config.json"))?;
    let mut store = ReplayStore::new();

    // one translation record per suite row, en -> de
    let suite =
        std::fs::read_to_string(repo.join("data/demo/hate_suite.csv")).expect("demo suite exists");
    let mut reader = csv::Reader::from_reader(suite.as_bytes());
    let mut n_translations = 0;
    for record in reader.records() {
        let record = record.expect("suite row parses");
        let text = record.get(0).expect("text column");
        let german =
            translate_de(text).unwrap_or_else(|| panic!("no canned translation for {text:?}"));
        let payload = translate_payload(text, &cfg.augment.source_lang, &cfg.augment.target_lang);
        store.insert("translate", payload, json!({ "text": german }));
        n_translations += 1;
    }

    // one generation record per configured spec
    for spec in &cfg.augment.generate {
        let texts = generated_texts(spec.label.name());
        assert_eq!(
            texts.len(),
            spec.count,
            "canned responses match the spec count"
        );
        store.insert(
            "generate",
            generate_payload(spec),
            json!({ "texts": texts }),
        );
    }

    let out = repo.join("data/demo/replay_store.jsonl");
    store.save(&out)?;
    println!(
        "recorded {} records ({} translations, {} generations) to {}",
        store.len(),
        n_translations,
        cfg.augment.generate.len(),
        out.display()
    );
    Ok(())
}
