"""Small residual CNN: one scalar head per regression metric, or a 2-way
softmax head for the Wada classifier.

A few strided residual blocks over a global-average-pooled trunk, roughly
1.5e5 parameters at the default width. GroupNorm instead of BatchNorm keeps
behavior identical between training and evaluation on tiny datasets. The
pooling head makes the network resolution agnostic, so desk-scale tiles and
full 333 x 333 basins go through the same model.
"""

from __future__ import annotations

import torch
from torch import nn


def _norm(channels: int) -> nn.GroupNorm:
    return nn.GroupNorm(min(8, channels), channels)


class ResidualBlock(nn.Module):
    def __init__(self, c_in: int, c_out: int, stride: int = 1):
        super().__init__()
        self.conv1 = nn.Conv2d(c_in, c_out, 3, stride=stride, padding=1, bias=False)
        self.norm1 = _norm(c_out)
        self.conv2 = nn.Conv2d(c_out, c_out, 3, padding=1, bias=False)
        self.norm2 = _norm(c_out)
        if stride != 1 or c_in != c_out:
            self.skip = nn.Sequential(
                nn.Conv2d(c_in, c_out, 1, stride=stride, bias=False), _norm(c_out)
            )
        else:
            self.skip = nn.Identity()
        self.act = nn.ReLU(inplace=True)

    def forward(self, x):
        out = self.act(self.norm1(self.conv1(x)))
        out = self.norm2(self.conv2(out))
        return self.act(out + self.skip(x))


class BasinCNN(nn.Module):
    def __init__(self, n_outputs: int = 1, width: int = 16):
        super().__init__()
        self.stem = nn.Sequential(
            nn.Conv2d(1, width, 3, stride=2, padding=1, bias=False),
            _norm(width),
            nn.ReLU(inplace=True),
        )
        self.blocks = nn.Sequential(
            ResidualBlock(width, 2 * width, stride=2),
            ResidualBlock(2 * width, 4 * width, stride=2),
            ResidualBlock(4 * width, 4 * width, stride=2),
        )
        self.head = nn.Linear(4 * width, n_outputs)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        out = self.blocks(self.stem(x))
        out = out.mean(dim=(2, 3))
        return self.head(out)


def build_model(metric: str, width: int = 16) -> BasinCNN:
    """Regression metrics get one scalar output, wada a 2-way classifier."""
    return BasinCNN(n_outputs=2 if metric == "wada" else 1, width=width)


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
