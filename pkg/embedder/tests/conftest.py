import pytest
import torch

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "bank", "river", "dance", "dan", "##ce", "##cing",
    "watch", "walk", "##ing", "##s", "book", "sentence", "balloon",
    "bal", "##loon", "along", "of", ".", ",",
]


@pytest.fixture(scope="session")
def vocab_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("vocab") / "vocab.txt"
    path.write_text("\n".join(VOCAB) + "\n")
    return str(path)


@pytest.fixture(scope="session")
def tokenizer(vocab_file):
    from transformers import BertTokenizer

    return BertTokenizer(vocab_file)


@pytest.fixture(scope="session")
def tiny_model():
    from transformers import BertConfig, BertModel

    config = BertConfig(
        vocab_size=len(VOCAB), hidden_size=16, num_hidden_layers=4,
        num_attention_heads=2, intermediate_size=32,
        max_position_embeddings=32, output_hidden_states=True)
    torch.manual_seed(0)
    model = BertModel(config)
    model.eval()
    return model
