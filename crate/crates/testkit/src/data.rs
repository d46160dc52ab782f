use eat_core::corpus::{write_predictions, DatasetSplit, SplitName};
use eat_core::lang::LanguageCode;
use eat_core::sentence::LabeledSentence;
use eat_core::tag::{BioTag, TagSet};

/// One entity's place in the scripted conversation: how the extractor
/// names it in English and what every backward-translation round replies.
pub struct ScriptedEntity {
    pub tag: &'static str,
    /// Surface exactly as the extraction reply spells it.
    pub english: &'static str,
    /// Reply to the first backward round (analysis).
    pub analysis: &'static str,
    /// Reply to later backward rounds (verification).
    pub refined: &'static str,
    /// Reply to the backward filter call, possibly quote-decorated.
    pub candidate_reply: &'static str,
    /// The decorated reply after stripping — what must ground in the
    /// sentence.
    pub candidate: &'static str,
}

/// One sentence's full script: gold annotation plus a reply for every
/// prompt the pipeline can send about it.
pub struct ScriptedSentence {
    pub tokens: &'static [&'static str],
    pub tags: &'static [&'static str],
    /// Reply to the first forward round (entity analysis).
    pub analysis: &'static str,
    /// Reply to later forward rounds (draft translation).
    pub translation: &'static str,
    /// Reply to the forward filter call, possibly quote-decorated.
    pub english_reply: &'static str,
    /// The stripped translation — what the extractor is asked about.
    pub english: &'static str,
    /// Reply to the extraction prompt over `english`.
    pub extraction: &'static str,
    pub entities: &'static [ScriptedEntity],
}

impl ScriptedSentence {
    /// The sentence as the pipeline sees it: tokens joined with spaces.
    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Ten Chinese sentences covering one-entity, multi-entity, zero-entity,
/// mixed-script, and split-token cases. Source texts and English
/// translations are chosen so none is a substring of another — the
/// scripted backend relies on that to identify prompts.
pub const SCRIPTS: &[ScriptedSentence] = &[
    ScriptedSentence {
        tokens: &["我", "爱", "北京"],
        tags: &["O", "O", "B-LOC"],
        analysis: "The sentence mentions one location: 北京, the city of Beijing. The rest is a plain subject-verb clause.",
        translation: "I love Beijing",
        english_reply: "\u{201c}I love Beijing\u{201d}",
        english: "I love Beijing",
        extraction: "LOC: Beijing",
        entities: &[ScriptedEntity {
            tag: "LOC",
            english: "Beijing",
            analysis: "\"Beijing\" is the capital city; the sentence writes it as 北京.",
            refined: "北京 appears in the sentence exactly as written.",
            candidate_reply: "「北京」",
            candidate: "北京",
        }],
    },
    ScriptedSentence {
        tokens: &["高明", "是", "一位", "老师"],
        tags: &["B-PER", "O", "O", "O"],
        analysis: "高明 is a personal name (Gao Ming); 老师 means teacher and is a common noun, not an entity.",
        translation: "Gao Ming is a teacher",
        english_reply: "Gao Ming is a teacher",
        english: "Gao Ming is a teacher",
        extraction: "PER: Gao Ming",
        entities: &[ScriptedEntity {
            tag: "PER",
            english: "Gao Ming",
            analysis: "\"Gao Ming\" is the person written 高明 at the start of the sentence.",
            refined: "高明 matches the original wording.",
            candidate_reply: "高明",
            candidate: "高明",
        }],
    },
    ScriptedSentence {
        tokens: &["联合国", "成立", "于", "1945年"],
        tags: &["B-ORG", "O", "O", "O"],
        analysis: "联合国 is the United Nations, an organization. 1945年 is a year, which none of the given tags covers.",
        translation: "The United Nations was founded in 1945",
        english_reply: "The United Nations was founded in 1945",
        english: "The United Nations was founded in 1945",
        extraction: "ORG: United Nations",
        entities: &[ScriptedEntity {
            tag: "ORG",
            english: "United Nations",
            analysis: "\"United Nations\" translates to 联合国.",
            refined: "联合国 is the first token of the sentence, so it matches verbatim.",
            candidate_reply: "联合国",
            candidate: "联合国",
        }],
    },
    ScriptedSentence {
        tokens: &["今天", "天气", "很", "好"],
        tags: &["O", "O", "O", "O"],
        analysis: "No named entities here; the sentence only talks about today's weather.",
        translation: "The weather is nice today",
        english_reply: "The weather is nice today",
        english: "The weather is nice today",
        extraction: "None",
        entities: &[],
    },
    ScriptedSentence {
        tokens: &["我", "从", "巴黎", "到", "伦敦"],
        tags: &["O", "O", "B-LOC", "O", "B-LOC"],
        analysis: "Two locations appear: 巴黎 (Paris) and 伦敦 (London).",
        translation: "I travel from Paris to London",
        english_reply: "I travel from Paris to London",
        english: "I travel from Paris to London",
        extraction: "LOC: Paris; LOC: London",
        entities: &[
            ScriptedEntity {
                tag: "LOC",
                english: "Paris",
                analysis: "\"Paris\" corresponds to 巴黎.",
                refined: "巴黎 is used verbatim in the sentence.",
                candidate_reply: "巴黎",
                candidate: "巴黎",
            },
            ScriptedEntity {
                tag: "LOC",
                english: "London",
                analysis: "\"London\" corresponds to 伦敦.",
                refined: "伦敦 is used verbatim in the sentence.",
                candidate_reply: "伦敦",
                candidate: "伦敦",
            },
        ],
    },
    ScriptedSentence {
        tokens: &["Alice", "住在", "上海"],
        tags: &["B-PER", "O", "B-LOC"],
        analysis: "Alice is a personal name kept in Latin script; 上海 is the city of Shanghai.",
        translation: "Alice lives in Shanghai",
        english_reply: "\"Alice lives in Shanghai\"",
        english: "Alice lives in Shanghai",
        extraction: "PER: Alice; LOC: Shanghai",
        entities: &[
            ScriptedEntity {
                tag: "PER",
                english: "Alice",
                analysis: "\"Alice\" stays as written; the original sentence also uses the Latin spelling.",
                refined: "Alice",
                candidate_reply: "\"Alice\"",
                candidate: "Alice",
            },
            ScriptedEntity {
                tag: "LOC",
                english: "Shanghai",
                analysis: "\"Shanghai\" corresponds to 上海.",
                refined: "上海 appears in the sentence.",
                candidate_reply: "上海",
                candidate: "上海",
            },
        ],
    },
    ScriptedSentence {
        tokens: &["王伟", "在", "华为", "工作"],
        tags: &["B-PER", "O", "B-ORG", "O"],
        analysis: "王伟 (Wang Wei) is a person; 华为 (Huawei) is a company.",
        translation: "Wang Wei works at Huawei",
        english_reply: "Wang Wei works at Huawei",
        english: "Wang Wei works at Huawei",
        extraction: "PER: Wang Wei; ORG: Huawei",
        entities: &[
            ScriptedEntity {
                tag: "PER",
                english: "Wang Wei",
                analysis: "\"Wang Wei\" is the person 王伟.",
                refined: "王伟 matches the sentence.",
                candidate_reply: "王伟",
                candidate: "王伟",
            },
            ScriptedEntity {
                tag: "ORG",
                english: "Huawei",
                analysis: "\"Huawei\" is the company 华为.",
                refined: "华为 matches the sentence.",
                candidate_reply: "华为",
                candidate: "华为",
            },
        ],
    },
    ScriptedSentence {
        tokens: &["长城", "位于", "中国"],
        tags: &["B-LOC", "O", "B-LOC"],
        analysis: "长城 is the Great Wall and 中国 is China; both are locations.",
        translation: "The Great Wall is located in China",
        english_reply: "The Great Wall is located in China",
        english: "The Great Wall is located in China",
        extraction: "LOC: Great Wall; LOC: China",
        entities: &[
            ScriptedEntity {
                tag: "LOC",
                english: "Great Wall",
                analysis: "\"Great Wall\" corresponds to 长城.",
                refined: "长城 is the exact wording.",
                candidate_reply: "长城",
                candidate: "长城",
            },
            ScriptedEntity {
                tag: "LOC",
                english: "China",
                analysis: "\"China\" corresponds to 中国.",
                refined: "中国 is the exact wording.",
                candidate_reply: "中国",
                candidate: "中国",
            },
        ],
    },
    ScriptedSentence {
        tokens: &["张伟", "和", "李娜", "去", "东", "京"],
        tags: &["B-PER", "O", "B-PER", "O", "B-LOC", "I-LOC"],
        analysis: "Two people, 张伟 and 李娜, and a destination split across two tokens: 东 京, i.e. Tokyo.",
        translation: "Zhang Wei and Li Na go to Tokyo",
        english_reply: "Zhang Wei and Li Na go to Tokyo",
        english: "Zhang Wei and Li Na go to Tokyo",
        extraction: "PER: Zhang Wei\nPER: Li Na\nLOC: Tokyo",
        entities: &[
            ScriptedEntity {
                tag: "PER",
                english: "Zhang Wei",
                analysis: "\"Zhang Wei\" is 张伟.",
                refined: "张伟 matches the sentence.",
                candidate_reply: "张伟",
                candidate: "张伟",
            },
            ScriptedEntity {
                tag: "PER",
                english: "Li Na",
                analysis: "\"Li Na\" is 李娜.",
                refined: "李娜 matches the sentence.",
                candidate_reply: "李娜",
                candidate: "李娜",
            },
            ScriptedEntity {
                tag: "LOC",
                english: "Tokyo",
                analysis: "\"Tokyo\" is written 东京, though the sentence splits it into two tokens.",
                refined: "东京 covers the two tokens 东 and 京.",
                candidate_reply: "『东京』",
                candidate: "东京",
            },
        ],
    },
    ScriptedSentence {
        tokens: &["腾讯", "总部", "在", "深圳"],
        tags: &["B-ORG", "O", "O", "B-LOC"],
        analysis: "腾讯 (Tencent) is a company and 深圳 (Shenzhen) is a city.",
        translation: "Tencent is headquartered in Shenzhen",
        english_reply: "Tencent is headquartered in Shenzhen",
        english: "Tencent is headquartered in Shenzhen",
        extraction: "ORG: Tencent; LOC: Shenzhen",
        entities: &[
            ScriptedEntity {
                tag: "ORG",
                english: "Tencent",
                analysis: "\"Tencent\" is the company 腾讯.",
                refined: "腾讯 matches the sentence.",
                candidate_reply: "腾讯",
                candidate: "腾讯",
            },
            ScriptedEntity {
                tag: "LOC",
                english: "Shenzhen",
                analysis: "\"Shenzhen\" is the city 深圳.",
                refined: "深圳 matches the sentence.",
                candidate_reply: "深圳",
                candidate: "深圳",
            },
        ],
    },
];

pub fn zh() -> LanguageCode {
    LanguageCode::new("zh").unwrap()
}

pub fn tag_set() -> TagSet {
    TagSet::person_location_organization()
}

/// The scripted sentences as a test split, ids assigned by position.
pub fn dataset() -> DatasetSplit {
    let tags = tag_set();
    let sentences = SCRIPTS
        .iter()
        .enumerate()
        .map(|(id, s)| {
            let tokens = s.tokens.iter().map(|t| t.to_string()).collect();
            let bio = s
                .tags
                .iter()
                .map(|t| BioTag::parse(t, &tags).expect("script table uses valid tags"))
                .collect();
            LabeledSentence::new(id, tokens, bio, zh()).expect("script table is well-formed")
        })
        .collect();
    DatasetSplit { sentences, language: zh(), split_name: SplitName::Test }
}

/// Gold tags per sentence, in dataset order.
pub fn gold_tags() -> Vec<Vec<BioTag>> {
    dataset().sentences.into_iter().map(|s| s.tags).collect()
}

/// The dataset rendered in canonical column format, ready to write to a
/// `.bio` file.
pub fn bio_text() -> String {
    let split = dataset();
    let gold: Vec<_> = split.sentences.iter().map(|s| s.tags.clone()).collect();
    write_predictions(&split, &gold).expect("gold tags match the dataset by construction")
}
