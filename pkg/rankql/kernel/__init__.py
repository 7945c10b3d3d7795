from .rank_kernel import (TiePolicy, ScoreMatrix, CenteredKernel, RankEmbedding,
                          score_matrix, center_kernel, embed, midrank_embedding, as_sample)
