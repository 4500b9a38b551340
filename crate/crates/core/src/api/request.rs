//! API request construction and canonical fixture keys.

use crate::http::HttpRequest;

const BASE_URL: &str = "https://www.googleapis.com/youtube/v3";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Search,
    Videos,
    Channels,
    /// Best-effort single-page comment fetch; not part of the scan core.
    CommentThreads,
}

impl Endpoint {
    pub fn path(&self) -> &'static str {
        match self {
            Endpoint::Search => "search",
            Endpoint::Videos => "videos",
            Endpoint::Channels => "channels",
            Endpoint::CommentThreads => "commentThreads",
        }
    }
}

/// One logical API call. The parameter list never includes the API key;
/// key injection happens in the live transport so fixture keys stay
/// canonical and credential-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApiRequest {
    pub endpoint: Endpoint,
    pub params: Vec<(String, String)>,
    pub quota_cost: u64,
}

impl ApiRequest {
    pub fn new(endpoint: Endpoint, params: Vec<(String, String)>, quota_cost: u64) -> Self {
        assert!(quota_cost > 0, "quota cost must be positive");
        Self {
            endpoint,
            params,
            quota_cost,
        }
    }

    pub fn url(&self) -> String {
        let mut serializer = url::form_urlencoded::Serializer::new(String::new());
        for (k, v) in &self.params {
            serializer.append_pair(k, v);
        }
        format!("{BASE_URL}/{}?{}", self.endpoint.path(), serializer.finish())
    }

    pub fn to_http(&self) -> HttpRequest {
        HttpRequest::get(self.url())
    }

    pub fn canonical_key(&self) -> String {
        self.to_http().canonical_key()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_is_independent_of_param_order() {
        let a = ApiRequest::new(
            Endpoint::Videos,
            vec![
                ("part".into(), "snippet".into()),
                ("id".into(), "a,b".into()),
            ],
            1,
        );
        let b = ApiRequest::new(
            Endpoint::Videos,
            vec![
                ("id".into(), "a,b".into()),
                ("part".into(), "snippet".into()),
            ],
            1,
        );
        assert_eq!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn url_targets_the_endpoint_path() {
        let req = ApiRequest::new(Endpoint::Search, vec![("q".into(), "x y".into())], 100);
        assert!(req.url().starts_with("https://www.googleapis.com/youtube/v3/search?"));
        assert!(req.url().contains("q=x+y"));
    }
}
