int asag_placeholder_corpus_test;
