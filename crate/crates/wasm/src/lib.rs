//! Browser bindings for the spam filter demo. Every call returns JSON text;
//! see `www/` for the page that uses them.

pub mod demo;

use wasm_bindgen::prelude::*;

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo views always serialize")
}

fn js(e: nbknn::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `{"tokens": [...], "tag_count": n}`
#[wasm_bindgen]
pub fn tokenize(text: &str) -> String {
    json(&demo::tokenize(text))
}

/// A model trained on a synthetic corpus, kept alive on the JS side.
#[wasm_bindgen]
pub struct DemoModel {
    inner: demo::Demo,
}

#[wasm_bindgen]
impl DemoModel {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u32, n_spam: u32, n_ham: u32, fraction: f64, features: u32) -> Result<DemoModel, JsError> {
        demo::Demo::new(seed as u64, n_spam as usize, n_ham as usize, fraction, features as usize)
            .map(|inner| DemoModel { inner })
            .map_err(js)
    }

    pub fn summary(&self) -> String {
        json(&self.inner.summary())
    }

    pub fn classify(&self, text: &str, k: u32, metric: &str, alpha: f64, beta: f64) -> Result<String, JsError> {
        self.inner
            .classify(text, k as usize, metric, alpha, beta)
            .map(|c| json(&c))
            .map_err(js)
    }

    #[wasm_bindgen(js_name = accuracyCurve)]
    pub fn accuracy_curve(&self, metric: &str, max_k: u32, alpha: f64, beta: f64) -> Result<String, JsError> {
        self.inner
            .accuracy_curve(metric, max_k as usize, alpha, beta)
            .map(|c| json(&c))
            .map_err(js)
    }

    pub fn sample(&self, spam: bool, index: u32) -> String {
        self.inner.sample(spam, index as usize)
    }
}
